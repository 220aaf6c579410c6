//! The immersion catalog: analytic parametrizations with exact jets.
//!
//! Chart conventions
//! - spheres and ellipsoids use hyperspherical angles (θ1, θ2, θ3, φ):
//!   Φ = r (cosθ1, sinθ1 cosθ2, sinθ1 sinθ2 cosθ3, sinθ1 sinθ2 sinθ3 cosφ,
//!        sinθ1 sinθ2 sinθ3 sinφ), θ ∈ (0,π), φ periodic;
//! - the minimal cone over S¹(√(1/3))×S²(√(2/3)) uses (t, α, θ, φ) with
//!   t bounded away from the apex;
//! - hyperplane and graphs use a box chart.
//!
//! Each variant declares its safe domain; sample points and quadrature nodes
//! stay strictly inside it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::mobius::MobiusTransform;
use super::CatalogError;
use crate::jets::Jet;

/// Tagged description of a catalog immersion.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub enum ImmersionSpec {
    Hyperplane,
    RoundSphere {
        radius: f64,
    },
    PerturbedSphere {
        radius: f64,
        amplitude: f64,
        mode: u32,
    },
    Ellipsoid {
        semi_axes: [f64; 5],
    },
    CliffordCone,
    Graph {
        height: Expr,
    },
    MobiusImage {
        inner: Box<ImmersionSpec>,
        transform: MobiusTransform,
    },
}

/// Chart box with per-axis periodicity and the margin random samples keep
/// from non-periodic boundaries (coordinate singularities live there).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ChartDomain {
    pub ranges: [(f64, f64); 4],
    pub periodic: [bool; 4],
    pub margin: f64,
}

impl ChartDomain {
    fn angular() -> ChartDomain {
        use std::f64::consts::{PI, TAU};
        ChartDomain {
            ranges: [(0.0, PI), (0.0, PI), (0.0, PI), (0.0, TAU)],
            periodic: [false, false, false, true],
            margin: 0.2,
        }
    }

    fn unit_box() -> ChartDomain {
        ChartDomain {
            ranges: [(0.0, 1.0); 4],
            periodic: [false; 4],
            margin: 0.0,
        }
    }

    fn cone() -> ChartDomain {
        use std::f64::consts::{PI, TAU};
        ChartDomain {
            ranges: [(1.0, 2.0), (0.0, TAU), (0.0, PI), (0.0, TAU)],
            periodic: [false, true, false, true],
            margin: 0.15,
        }
    }

    pub fn contains(&self, p: [f64; 4]) -> bool {
        p.iter().zip(&self.ranges).zip(&self.periodic).all(
            |((&x, &(lo, hi)), &per)| {
                if per {
                    x.is_finite()
                } else {
                    x > lo && x < hi
                }
            },
        )
    }

    /// Uniform sample strictly inside the safe region.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 4] {
        std::array::from_fn(|i| {
            let (lo, hi) = self.ranges[i];
            let m = if self.periodic[i] { 0.0 } else { self.margin };
            rng.gen_range(lo + m..hi - m)
        })
    }
}

impl ImmersionSpec {
    /// Exact jets of the parametrization at a chart point.
    pub fn evaluate_jet(&self, point: [f64; 4], degree: usize) -> Result<[Jet; 5], CatalogError> {
        if !self.domain().contains(point) {
            return Err(CatalogError::OutsideDomain {
                point,
                spec: self.label(),
            });
        }
        self.evaluate_unchecked(point, degree)
    }

    fn evaluate_unchecked(&self, point: [f64; 4], degree: usize) -> Result<[Jet; 5], CatalogError> {
        let x = |i: usize| Jet::variable(i, point, degree);
        match self {
            ImmersionSpec::Hyperplane => Ok([
                x(0),
                x(1),
                x(2),
                x(3),
                Jet::constant(0.0, point, degree),
            ]),
            ImmersionSpec::RoundSphere { radius } => {
                Ok(sphere_map(*radius, point, degree, None))
            }
            ImmersionSpec::PerturbedSphere {
                radius,
                amplitude,
                mode,
            } => Ok(sphere_map(
                *radius,
                point,
                degree,
                Some((*amplitude, *mode)),
            )),
            ImmersionSpec::Ellipsoid { semi_axes } => {
                let unit = sphere_map(1.0, point, degree, None);
                Ok(std::array::from_fn(|a| unit[a].scaled(semi_axes[a])))
            }
            ImmersionSpec::CliffordCone => {
                let (t, alpha, theta, phi) = (x(0), x(1), x(2), x(3));
                let c1 = (1.0f64 / 3.0).sqrt();
                let c2 = (2.0f64 / 3.0).sqrt();
                Ok([
                    (&t * alpha.cos()).scaled(c1),
                    (&t * alpha.sin()).scaled(c1),
                    (&t * theta.cos()).scaled(c2),
                    (&t * theta.sin() * phi.cos()).scaled(c2),
                    (&t * theta.sin() * phi.sin()).scaled(c2),
                ])
            }
            ImmersionSpec::Graph { height } => {
                let vars = [x(0), x(1), x(2), x(3)];
                let h = height.eval_jet(&vars)?;
                Ok([x(0), x(1), x(2), x(3), h])
            }
            ImmersionSpec::MobiusImage { inner, transform } => {
                let base = inner.evaluate_unchecked(point, degree)?;
                transform.apply_jets(&base)
            }
        }
    }

    pub fn domain(&self) -> ChartDomain {
        match self {
            ImmersionSpec::Hyperplane | ImmersionSpec::Graph { .. } => ChartDomain::unit_box(),
            ImmersionSpec::RoundSphere { .. }
            | ImmersionSpec::PerturbedSphere { .. }
            | ImmersionSpec::Ellipsoid { .. } => ChartDomain::angular(),
            ImmersionSpec::CliffordCone => ChartDomain::cone(),
            ImmersionSpec::MobiusImage { inner, .. } => inner.domain(),
        }
    }

    /// Deterministic random chart points inside the safe domain.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<[f64; 4]> {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = self.domain();
        (0..count).map(|_| domain.sample(&mut rng)).collect()
    }

    /// Immersions that are exactly minimal (H ≡ 0) by construction.
    pub fn is_minimal(&self) -> bool {
        matches!(self, ImmersionSpec::Hyperplane | ImmersionSpec::CliffordCone)
    }

    /// Immersions that are critical points of the energy (spheres and the
    /// minimal members; Möbius images of critical members stay critical).
    pub fn is_critical(&self) -> bool {
        match self {
            ImmersionSpec::Hyperplane
            | ImmersionSpec::CliffordCone
            | ImmersionSpec::RoundSphere { .. } => true,
            ImmersionSpec::MobiusImage { inner, .. } => inner.is_critical(),
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ImmersionSpec::Hyperplane => "hyperplane".into(),
            ImmersionSpec::RoundSphere { radius } => format!("sphere:r={radius}"),
            ImmersionSpec::PerturbedSphere {
                radius,
                amplitude,
                mode,
            } => format!("perturbed-sphere:r={radius},eps={amplitude},mode={mode}"),
            ImmersionSpec::Ellipsoid { semi_axes } => format!(
                "ellipsoid:axes={}",
                semi_axes
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            ImmersionSpec::CliffordCone => "clifford-cone".into(),
            ImmersionSpec::Graph { height } => format!("graph:f={height}"),
            ImmersionSpec::MobiusImage { inner, .. } => {
                format!("mobius({})", inner.label())
            }
        }
    }

    /// Parses the compact command-line form, e.g. `sphere:r=2`,
    /// `ellipsoid:axes=1,1,1,1,1.5`, `perturbed-sphere:r=1,eps=0.1,mode=2`,
    /// `graph:f=0.3*x1*x2`, `hyperplane`, `clifford-cone`.
    pub fn parse_cli(text: &str) -> Result<ImmersionSpec, CatalogError> {
        let bad = |message: String| CatalogError::BadSpec {
            text: text.to_string(),
            message,
        };
        let (name, args) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let mut kv: std::collections::BTreeMap<String, String> = std::collections::BTreeMap::new();
        if let Some(args) = args {
            // list values (key=a,b,c) keep accruing onto the last key seen
            let mut current_key: Option<String> = None;
            for piece in args.split(',') {
                match piece.split_once('=') {
                    Some((k, v)) => {
                        current_key = Some(k.trim().to_string());
                        kv.insert(k.trim().to_string(), v.trim().to_string());
                    }
                    None => match &current_key {
                        Some(k) => {
                            let slot = kv.get_mut(k).unwrap();
                            slot.push(',');
                            slot.push_str(piece.trim());
                        }
                        None => return Err(bad(format!("dangling argument `{piece}`"))),
                    },
                }
            }
        }
        let num = |key: &str, default: Option<f64>| match kv.get(key) {
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number for `{key}`: {v}"))),
            None => default.ok_or_else(|| bad(format!("missing `{key}`"))),
        };
        match name {
            "hyperplane" => Ok(ImmersionSpec::Hyperplane),
            "clifford-cone" => Ok(ImmersionSpec::CliffordCone),
            "sphere" => Ok(ImmersionSpec::RoundSphere {
                radius: num("r", Some(1.0))?,
            }),
            "perturbed-sphere" => Ok(ImmersionSpec::PerturbedSphere {
                radius: num("r", Some(1.0))?,
                amplitude: num("eps", Some(0.1))?,
                mode: num("mode", Some(2.0))? as u32,
            }),
            "ellipsoid" => {
                let axes = kv
                    .get("axes")
                    .ok_or_else(|| bad("missing `axes`".into()))?;
                let parts: Vec<f64> = axes
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(format!("bad axes list: {axes}")))?;
                if parts.len() != 5 {
                    return Err(bad("ellipsoid needs 5 semi-axes".into()));
                }
                Ok(ImmersionSpec::Ellipsoid {
                    semi_axes: [parts[0], parts[1], parts[2], parts[3], parts[4]],
                })
            }
            "graph" => {
                let f = kv.get("f").ok_or_else(|| bad("missing `f`".into()))?;
                Ok(ImmersionSpec::Graph {
                    height: Expr::parse(f).map_err(|e| bad(e.to_string()))?,
                })
            }
            _ => Err(bad(format!("unknown immersion `{name}`"))),
        }
    }
}

/// Hyperspherical parametrization, optionally with a radial perturbation
/// ρ(θ1) = 1 + ε cos(m θ1) (a polynomial in cosθ1, smooth across the poles).
fn sphere_map(
    radius: f64,
    point: [f64; 4],
    degree: usize,
    perturbation: Option<(f64, u32)>,
) -> [Jet; 5] {
    let t1 = Jet::variable(0, point, degree);
    let t2 = Jet::variable(1, point, degree);
    let t3 = Jet::variable(2, point, degree);
    let ph = Jet::variable(3, point, degree);
    let unit: [Jet; 5] = [
        t1.cos(),
        t1.sin() * t2.cos(),
        t1.sin() * t2.sin() * t3.cos(),
        t1.sin() * t2.sin() * t3.sin() * ph.cos(),
        t1.sin() * t2.sin() * t3.sin() * ph.sin(),
    ];
    let rho = match perturbation {
        Some((eps, mode)) => {
            Jet::constant(radius, point, degree) + t1.scaled(mode as f64).cos().scaled(radius * eps)
        }
        None => Jet::constant(radius, point, degree),
    };
    std::array::from_fn(|a| &unit[a] * &rho)
}
