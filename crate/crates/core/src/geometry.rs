//! First and second fundamental forms, unit normal, Christoffel symbols and
//! the covariant operators of a chart immersion, all in jet arithmetic.
//!
//! Conventions: the metric is `g_ij = ∂_iΦ·∂_jΦ`; the unit normal is the
//! ambient Hodge dual of the wedge of the four tangents, normalized, with
//! chart orientation `dx¹∧dx²∧dx³∧dx⁴` — so the sign of the scalar second
//! fundamental form `h_ij = n·∂_i∂_jΦ` is chart-dependent and only |H| and
//! even powers are orientation-free. The mean curvature uses the 4-dimensional
//! convention `H = ¼ g^{ij} h_ij`. All Laplacians are `div grad` (nonpositive
//! spectrum on closed manifolds).

use once_cell::sync::OnceCell;
use thiserror::Error;

use crate::jets::{Jet, JetError};
use crate::scalar::Scalar;

/// Relative floor under which the metric determinant flags a branch point.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate immersion: det g = {det:.3e} <= {threshold:.3e} (branch point)")]
    DegenerateMetric { det: f64, threshold: f64 },
    #[error("jet degree {available} too low; this operation needs degree >= {needed}")]
    InsufficientDegree { needed: usize, available: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Metric, inverse metric, volume factor, Christoffel symbols, unit normal
/// and tangent frame of an immersion at one chart point, as jets.
#[derive(Clone)]
pub struct FramePack {
    pub degree: usize,
    /// ∂_iΦ, indexed [chart i][ambient a].
    pub tangents: [[Jet; 5]; 4],
    /// ∂_i∂_jΦ, indexed [i][j][a].
    pub second: [[[Jet; 5]; 4]; 4],
    /// g_ij
    pub metric: [[Jet; 4]; 4],
    /// g^ij
    pub inv_metric: [[Jet; 4]; 4],
    pub det_g: Jet,
    pub sqrt_det_g: Jet,
    /// Unit normal, 5 ambient components.
    pub normal: [Jet; 5],
    christoffel: OnceCell<[[[Jet; 4]; 4]; 4]>,
}

fn det3(m: [[&Jet; 3]; 3]) -> Jet {
    let a = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let b = m[1][0] * m[2][2] - m[1][2] * m[2][0];
    let c = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    m[0][0] * a - m[0][1] * b + m[0][2] * c
}

fn cofactor(g: &[[Jet; 4]; 4], row: usize, col: usize) -> Jet {
    let rows: Vec<usize> = (0..4).filter(|&i| i != row).collect();
    let cols: Vec<usize> = (0..4).filter(|&j| j != col).collect();
    let sub = [
        [&g[rows[0]][cols[0]], &g[rows[0]][cols[1]], &g[rows[0]][cols[2]]],
        [&g[rows[1]][cols[0]], &g[rows[1]][cols[1]], &g[rows[1]][cols[2]]],
        [&g[rows[2]][cols[0]], &g[rows[2]][cols[1]], &g[rows[2]][cols[2]]],
    ];
    let d = det3(sub);
    if (row + col) % 2 == 0 {
        d
    } else {
        -d
    }
}

fn det4(g: &[[Jet; 4]; 4]) -> Jet {
    let mut acc = Jet::zero();
    for j in 0..4 {
        acc = acc + &g[0][j] * cofactor(g, 0, j);
    }
    acc
}

fn second_cache_clone(tangents: &[[Jet; 5]; 4], j: usize, i: usize) -> [Jet; 5] {
    // ∂_i∂_j = ∂_j∂_i on jets exactly; reuse the lower-triangle entry
    std::array::from_fn(|a| tangents[j][a].derivative(i))
}

/// Fills a symmetric 4×4 from its upper triangle.
fn symmetric4(f: impl Fn(usize, usize) -> Jet) -> [[Jet; 4]; 4] {
    let mut rows: [[Option<Jet>; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in i..4 {
            let v = f(i, j);
            if i != j {
                rows[j][i] = Some(v.clone());
            }
            rows[i][j] = Some(v);
        }
    }
    rows.map(|r| r.map(|c| c.unwrap()))
}

/// Builds the full frame from the immersion jet. Requires degree >= 2 and a
/// nondegenerate metric.
pub fn build_frame(phi: &[Jet; 5]) -> Result<FramePack, GeometryError> {
    let degree = phi.iter().map(|j| j.degree()).min().unwrap();
    if degree < 2 {
        return Err(GeometryError::InsufficientDegree {
            needed: 2,
            available: degree,
        });
    }
    let tangents: [[Jet; 5]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|a| phi[a].derivative(i)));
    let second: [[[Jet; 5]; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if j < i {
                second_cache_clone(&tangents, j, i)
            } else {
                std::array::from_fn(|a| tangents[i][a].derivative(j))
            }
        })
    });
    let metric: [[Jet; 4]; 4] = symmetric4(|i, j| dot5(&tangents[i], &tangents[j]));
    let det_g = det4(&metric);

    // Branch-point test on the Hadamard ratio: det g is compared against the
    // product of the squared tangent norms (the fourth power of the local
    // tangent scale). The ratio is scale-free, stays 1 on orthogonal charts
    // however small their volume factor, and vanishes exactly when the
    // tangents become linearly dependent.
    let tangent_scale_4 = (0..4).map(|i| metric[i][i].value()).product::<f64>();
    let threshold = DEGENERACY_THRESHOLD * tangent_scale_4;
    if det_g.value() <= threshold {
        return Err(GeometryError::DegenerateMetric {
            det: det_g.value(),
            threshold,
        });
    }

    let det_recip = det_g.try_recip()?;
    let inv_metric: [[Jet; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| cofactor(&metric, j, i) * &det_recip)
    });
    let sqrt_det_g = det_g.try_sqrt()?;

    // n = ⋆₅(∂₁Φ ∧ ∂₂Φ ∧ ∂₃Φ ∧ ∂₄Φ) normalized; its raw norm is √det g.
    let raw = wedge_dual(&tangents);
    let norm = dot5(&raw, &raw).try_sqrt()?;
    let norm_recip = norm.try_recip()?;
    let normal: [Jet; 5] = std::array::from_fn(|a| &raw[a] * &norm_recip);

    Ok(FramePack {
        degree,
        tangents,
        second,
        metric,
        inv_metric,
        det_g,
        sqrt_det_g,
        normal,
        christoffel: OnceCell::new(),
    })
}

impl FramePack {
    /// Γ^k_ij = ½ g^{km} (∂_i g_mj + ∂_j g_mi − ∂_m g_ij), computed on first
    /// use (pointwise density evaluation never needs it).
    pub fn christoffel(&self) -> &[[[Jet; 4]; 4]; 4] {
        self.christoffel.get_or_init(|| {
            let dg: [[[Jet; 4]; 4]; 4] = std::array::from_fn(|k| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| self.metric[i][j].derivative(k))
                })
            });
            std::array::from_fn(|k| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| {
                        let mut acc = Jet::zero();
                        for m in 0..4 {
                            let sym = &dg[i][m][j] + &dg[j][m][i] - &dg[m][i][j];
                            acc = acc + &self.inv_metric[k][m] * sym;
                        }
                        acc.scaled(0.5)
                    })
                })
            })
        })
    }

    /// Same frame with the opposite normal orientation.
    pub fn flipped(&self) -> FramePack {
        let mut out = self.clone();
        out.normal = std::array::from_fn(|a| -&self.normal[a]);
        out
    }

    /// ∇^iΦ = g^{ij} ∂_jΦ
    pub fn tangent_upper(&self, i: usize) -> [Jet; 5] {
        std::array::from_fn(|a| {
            let mut acc = Jet::zero();
            for j in 0..4 {
                acc = acc + &self.inv_metric[i][j] * &self.tangents[j][a];
            }
            acc
        })
    }

    pub fn raise1(&self, v: &[Jet; 4]) -> [Jet; 4] {
        std::array::from_fn(|i| {
            let mut acc = Jet::zero();
            for j in 0..4 {
                acc = acc + &self.inv_metric[i][j] * &v[j];
            }
            acc
        })
    }
}

/// Ambient Hodge dual of the wedge of the four tangent rows, through the
/// minor cascade of the 4×5 Jacobian (dual[a] = ± the 4×4 minor omitting
/// ambient column a, signed so that (t₁, t₂, t₃, t₄, n) is a positive
/// ambient frame).
fn wedge_dual(t: &[[Jet; 5]; 4]) -> [Jet; 5] {
    // 2×2 minors of rows (0,1), columns a<b
    let mut m2: Vec<Vec<Jet>> = vec![vec![Jet::zero(); 5]; 5];
    for a in 0..5 {
        for b in a + 1..5 {
            m2[a][b] = &t[0][a] * &t[1][b] - &t[0][b] * &t[1][a];
        }
    }
    // 3×3 minors of rows (0,1,2), columns a<b<c
    let mut m3 = std::collections::HashMap::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                let v = &m2[a][b] * &t[2][c] - &m2[a][c] * &t[2][b] + &m2[b][c] * &t[2][a];
                m3.insert((a, b, c), v);
            }
        }
    }
    // 4×4 minors omitting column a, cofactor-signed into the dual vector
    std::array::from_fn(|omit| {
        let cols: Vec<usize> = (0..5).filter(|&c| c != omit).collect();
        let mut acc = Jet::zero();
        for (r, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let m = &m3[&(rest[0], rest[1], rest[2])];
            let term = m * &t[3][c];
            acc = if r % 2 == 1 { acc + term } else { acc - term };
        }
        // e_omit coefficient of ⋆(t1∧t2∧t3∧t4): parity of moving column
        // `omit` out of the ordered 5-tuple
        if omit % 2 == 0 {
            acc
        } else {
            -acc
        }
    })
}

/// Second fundamental form, mean curvature and its covariant derivatives.
///
/// Fields that need more jet degree than the frame carries are `None`;
/// the accessors turn that into an insufficient-degree error.
#[derive(Clone)]
pub struct CurvaturePack {
    /// h_ij = n·∂_i∂_jΦ
    pub h_lower: [[Jet; 4]; 4],
    /// h^i_j
    pub h_mixed: [[Jet; 4]; 4],
    /// H = ¼ g^{ij} h_ij
    pub mean: Jet,
    /// (h₀)_ij = h_ij − H g_ij
    pub h0_lower: [[Jet; 4]; 4],
    /// |h|² = h_ij h^{ij}
    pub norm_h_sq: Jet,
    pub norm_h0_sq: Jet,
    /// ∂_i H
    pub grad_mean: [Jet; 4],
    /// ∇^i H
    pub grad_mean_upper: [Jet; 4],
    /// |∇H|²
    pub grad_mean_sq: Jet,
    degree: usize,
    h_upper: OnceCell<[[Jet; 4]; 4]>,
    tr_h3: OnceCell<Jet>,
    nabla_h: OnceCell<[[[Jet; 4]; 4]; 4]>,
    laplace_mean: OnceCell<Jet>,
    bilaplace_mean: OnceCell<Jet>,
}

impl CurvaturePack {
    /// h^{ij}
    pub fn h_upper(&self, frame: &FramePack) -> &[[Jet; 4]; 4] {
        self.h_upper.get_or_init(|| {
            symmetric4(|i, j| {
                let mut acc = Jet::zero();
                for k in 0..4 {
                    acc = acc + &self.h_mixed[i][k] * &frame.inv_metric[k][j];
                }
                acc
            })
        })
    }

    /// h^i_k h^k_m h^m_i
    pub fn tr_h3(&self) -> &Jet {
        self.tr_h3.get_or_init(|| {
            let mut acc = Jet::zero();
            for i in 0..4 {
                for k in 0..4 {
                    for m in 0..4 {
                        acc = acc + &self.h_mixed[i][k] * &self.h_mixed[k][m] * &self.h_mixed[m][i];
                    }
                }
            }
            acc
        })
    }

    /// ∇_k h_ij, indexed [k][i][j].
    pub fn nabla_h(&self, frame: &FramePack) -> &[[[Jet; 4]; 4]; 4] {
        self.nabla_h
            .get_or_init(|| cov_derivative_sym2_lower(&self.h_lower, frame))
    }

    /// Δ_g H (needs frame degree >= 4).
    pub fn laplace_mean(&self, frame: &FramePack) -> Result<&Jet, GeometryError> {
        if self.degree < 4 {
            return Err(GeometryError::InsufficientDegree {
                needed: 4,
                available: self.degree,
            });
        }
        if let Some(l) = self.laplace_mean.get() {
            return Ok(l);
        }
        let l = laplace_beltrami(&self.mean, frame)?;
        Ok(self.laplace_mean.get_or_init(|| l))
    }

    /// Δ_g² H (needs frame degree >= 6).
    pub fn bilaplace_mean(&self, frame: &FramePack) -> Result<&Jet, GeometryError> {
        if self.degree < 6 {
            return Err(GeometryError::InsufficientDegree {
                needed: 6,
                available: self.degree,
            });
        }
        if let Some(l) = self.bilaplace_mean.get() {
            return Ok(l);
        }
        let l = laplace_beltrami(self.laplace_mean(frame)?, frame)?;
        Ok(self.bilaplace_mean.get_or_init(|| l))
    }
}

/// Computes the curvature stack. Requires frame degree >= 3; Δ_gH appears
/// from degree 4 and Δ_g²H from degree 6.
pub fn curvature(frame: &FramePack) -> Result<CurvaturePack, GeometryError> {
    if frame.degree < 3 {
        return Err(GeometryError::InsufficientDegree {
            needed: 3,
            available: frame.degree,
        });
    }
    let h_lower: [[Jet; 4]; 4] =
        symmetric4(|i, j| dot5(&frame.normal, &frame.second[i][j]));
    let h_mixed: [[Jet; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Jet::zero();
            for k in 0..4 {
                acc = acc + &frame.inv_metric[i][k] * &h_lower[k][j];
            }
            acc
        })
    });
    let mut mean = Jet::zero();
    for i in 0..4 {
        mean = mean + &h_mixed[i][i];
    }
    let mean = mean.scaled(0.25);

    let h0_lower: [[Jet; 4]; 4] =
        symmetric4(|i, j| &h_lower[i][j] - &mean * &frame.metric[i][j]);

    // |h|² = h^i_j h^j_i and likewise for the trace-free part, keeping both
    // independent of the |h₀|² = |h|² − 4H² identity the tests check
    let mut norm_h_sq = Jet::zero();
    let mut norm_h0_sq = Jet::zero();
    for i in 0..4 {
        for j in 0..4 {
            norm_h_sq = norm_h_sq + &h_mixed[i][j] * &h_mixed[j][i];
            let d_ij = if i == j { 1.0 } else { 0.0 };
            let d_ji = d_ij;
            let a = &h_mixed[i][j] - mean.scaled(d_ij);
            let b = &h_mixed[j][i] - mean.scaled(d_ji);
            norm_h0_sq = norm_h0_sq + a * b;
        }
    }

    let grad_mean: [Jet; 4] = std::array::from_fn(|i| mean.derivative(i));
    let grad_mean_upper = frame.raise1(&grad_mean);
    let mut grad_mean_sq = Jet::zero();
    for i in 0..4 {
        grad_mean_sq = grad_mean_sq + &grad_mean[i] * &grad_mean_upper[i];
    }

    Ok(CurvaturePack {
        h_lower,
        h_mixed,
        mean,
        h0_lower,
        norm_h_sq,
        norm_h0_sq,
        grad_mean,
        grad_mean_upper,
        grad_mean_sq,
        degree: frame.degree,
        h_upper: OnceCell::new(),
        tr_h3: OnceCell::new(),
        nabla_h: OnceCell::new(),
        laplace_mean: OnceCell::new(),
        bilaplace_mean: OnceCell::new(),
    })
}

pub fn dot5(a: &[Jet; 5], b: &[Jet; 5]) -> Jet {
    let mut acc = Jet::zero();
    for i in 0..5 {
        acc = acc + &a[i] * &b[i];
    }
    acc
}

/// Δ_g f = |g|^{-1/2} ∂_i (|g|^{1/2} g^{ij} ∂_j f)
pub fn laplace_beltrami(f: &Jet, frame: &FramePack) -> Result<Jet, GeometryError> {
    if f.degree() < 2 {
        return Err(GeometryError::InsufficientDegree {
            needed: 2,
            available: f.degree(),
        });
    }
    let mut acc = Jet::zero();
    for i in 0..4 {
        let mut flux = Jet::zero();
        for j in 0..4 {
            flux = flux + &frame.sqrt_det_g * &frame.inv_metric[i][j] * f.derivative(j);
        }
        acc = acc + flux.derivative(i);
    }
    Ok(acc * frame.sqrt_det_g.try_recip()?)
}

/// ∇_j X^j = |g|^{-1/2} ∂_j (|g|^{1/2} X^j) for a chart vector field.
pub fn cov_divergence_vector(x_upper: &[Jet; 4], frame: &FramePack) -> Jet {
    let mut acc = Jet::zero();
    for j in 0..4 {
        acc = acc + (&frame.sqrt_det_g * &x_upper[j]).derivative(j);
    }
    acc * frame.sqrt_det_g.recip()
}

/// Covariant divergence applied componentwise to an ambient-vector-valued
/// chart vector field X^j_a (ambient components behave as chart scalars).
pub fn cov_divergence_ambient(x: &[[Jet; 5]; 4], frame: &FramePack) -> [Jet; 5] {
    std::array::from_fn(|a| {
        let comp: [Jet; 4] = std::array::from_fn(|j| x[j][a].clone());
        cov_divergence_vector(&comp, frame)
    })
}

/// ∇_k T_ij for a (0,2) tensor, indexed [k][i][j].
pub fn cov_derivative_sym2_lower(
    t: &[[Jet; 4]; 4],
    frame: &FramePack,
) -> [[[Jet; 4]; 4]; 4] {
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let gamma = frame.christoffel();
                let mut acc = t[i][j].derivative(k);
                for m in 0..4 {
                    acc = acc - &gamma[m][k][i] * &t[m][j] - &gamma[m][k][j] * &t[i][m];
                }
                acc
            })
        })
    })
}

/// ∇_k T^{ik} for a (2,0) tensor: ∂_k T^{ik} + Γ^i_{km} T^{mk} + Γ^k_{km} T^{im}.
pub fn cov_divergence_sym2_upper(t: &[[Jet; 4]; 4], frame: &FramePack) -> [Jet; 4] {
    let gamma = frame.christoffel();
    std::array::from_fn(|i| {
        let mut acc = Jet::zero();
        for k in 0..4 {
            acc = acc + t[i][k].derivative(k);
            for m in 0..4 {
                acc = acc + &gamma[i][k][m] * &t[m][k] + &gamma[k][k][m] * &t[i][m];
            }
        }
        acc
    })
}

/// Covariant Hessian of a scalar: ∇_i∇_j f = ∂_i∂_j f − Γ^k_{ij} ∂_k f.
pub fn cov_hessian_scalar(f: &Jet, frame: &FramePack) -> [[Jet; 4]; 4] {
    let grad: [Jet; 4] = std::array::from_fn(|i| f.derivative(i));
    let gamma = frame.christoffel();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = grad[j].derivative(i);
            for k in 0..4 {
                acc = acc - &gamma[k][i][j] * &grad[k];
            }
            acc
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Flat embedding (x¹, x², x³, x⁴, 0).
    fn flat_phi(point: [f64; 4], degree: usize) -> [Jet; 5] {
        std::array::from_fn(|a| {
            if a < 4 {
                Jet::variable(a, point, degree)
            } else {
                Jet::constant(0.0, point, degree)
            }
        })
    }

    /// Round sphere of radius r in hyperspherical angles (θ1, θ2, θ3, φ).
    fn sphere_phi(r: f64, point: [f64; 4], degree: usize) -> [Jet; 5] {
        let t1 = Jet::variable(0, point, degree);
        let t2 = Jet::variable(1, point, degree);
        let t3 = Jet::variable(2, point, degree);
        let ph = Jet::variable(3, point, degree);
        [
            t1.cos().scaled(r),
            (t1.sin() * t2.cos()).scaled(r),
            (t1.sin() * t2.sin() * t3.cos()).scaled(r),
            (t1.sin() * t2.sin() * t3.sin() * ph.cos()).scaled(r),
            (t1.sin() * t2.sin() * t3.sin() * ph.sin()).scaled(r),
        ]
    }

    /// Graph (x, f(x)) with f = ε x¹ x².
    fn graph_phi(eps: f64, point: [f64; 4], degree: usize) -> [Jet; 5] {
        let x1 = Jet::variable(0, point, degree);
        let x2 = Jet::variable(1, point, degree);
        [
            Jet::variable(0, point, degree),
            Jet::variable(1, point, degree),
            Jet::variable(2, point, degree),
            Jet::variable(3, point, degree),
            (x1 * x2).scaled(eps),
        ]
    }

    const SPHERE_POINT: [f64; 4] = [1.1, 0.9, 1.3, 0.7];

    #[test]
    fn flat_frame() {
        let frame = build_frame(&flat_phi([0.2, -0.4, 0.0, 1.0], 3)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(
                    frame.metric[i][j].value(),
                    if i == j { 1.0 } else { 0.0 }
                );
                for k in 0..4 {
                    assert_relative_eq!(frame.christoffel()[k][i][j].value(), 0.0);
                }
            }
        }
        // n = ±e5
        for a in 0..4 {
            assert_relative_eq!(frame.normal[a].value(), 0.0);
        }
        assert_relative_eq!(frame.normal[4].value().abs(), 1.0);

        let curv = curvature(&frame).unwrap();
        assert_relative_eq!(curv.mean.value(), 0.0);
        assert_relative_eq!(curv.norm_h_sq.value(), 0.0);
    }

    #[test]
    fn sphere_metric_determinant_closed_form() {
        for r in [0.5, 1.0, 2.0] {
            let frame = build_frame(&sphere_phi(r, SPHERE_POINT, 3)).unwrap();
            let [t1, t2, t3, _] = SPHERE_POINT;
            let expect = r.powi(8)
                * t1.sin().powi(6)
                * t2.sin().powi(4)
                * t3.sin().powi(2);
            assert_relative_eq!(frame.det_g.value(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn sphere_curvature_closed_forms() {
        for r in [0.5, 1.0, 2.0] {
            let frame = build_frame(&sphere_phi(r, SPHERE_POINT, 4)).unwrap();
            let curv = curvature(&frame).unwrap();
            assert_relative_eq!(curv.mean.value().abs(), 1.0 / r, max_relative = 1e-11);
            assert_relative_eq!(
                curv.norm_h_sq.value(),
                4.0 / (r * r),
                max_relative = 1e-11
            );
            // umbilic: h0 = 0
            assert!(curv.norm_h0_sq.value().abs() < 1e-12 / (r * r));
            // h_ij = ∓ g_ij / r
            let sign = curv.mean.value().signum();
            for i in 0..4 {
                for j in 0..4 {
                    assert_relative_eq!(
                        curv.h_lower[i][j].value(),
                        sign * frame.metric[i][j].value() / r,
                        max_relative = 1e-10,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn graph_metric_matches_expansion() {
        let eps = 0.3;
        let point = [0.7, -0.2, 0.4, 0.1];
        let frame = build_frame(&graph_phi(eps, point, 3)).unwrap();
        // g_ij = δ_ij + ∂_i f ∂_j f with f = ε x¹x²
        let df = [eps * point[1], eps * point[0], 0.0, 0.0];
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 } + df[i] * df[j];
                assert_relative_eq!(frame.metric[i][j].value(), expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn orthonormality_residuals() {
        for phi in [
            sphere_phi(1.0, SPHERE_POINT, 3),
            graph_phi(0.5, [0.3, 0.8, -0.2, 0.5], 3),
        ] {
            let frame = build_frame(&phi).unwrap();
            let n_norm = dot5(&frame.normal, &frame.normal).value();
            assert!((n_norm - 1.0).abs() <= 1e-10);
            for i in 0..4 {
                let t: [Jet; 5] = frame.tangents[i].clone();
                assert!(dot5(&frame.normal, &t).value().abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn inverse_metric_identity() {
        let frame = build_frame(&sphere_phi(1.3, SPHERE_POINT, 3)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += frame.inv_metric[i][k].value() * frame.metric[k][j].value();
                }
                assert_relative_eq!(acc, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_immersion_is_rejected() {
        // rank-deficient: Φ ignores x⁴
        let point = [0.1, 0.2, 0.3, 0.4];
        let phi: [Jet; 5] = [
            Jet::variable(0, point, 2),
            Jet::variable(1, point, 2),
            Jet::variable(2, point, 2),
            Jet::constant(0.0, point, 2),
            Jet::constant(0.0, point, 2),
        ];
        assert!(matches!(
            build_frame(&phi),
            Err(GeometryError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn laplace_beltrami_cases() {
        let frame = build_frame(&flat_phi([0.0; 4], 4)).unwrap();
        // constant → 0
        let c = Jet::constant(3.5, [0.0; 4], 4);
        assert_relative_eq!(laplace_beltrami(&c, &frame).unwrap().value(), 0.0);
        // flat chart, f = (x¹)² → 2
        let x1 = Jet::variable(0, [0.0; 4], 4);
        let f = &x1 * &x1;
        assert_relative_eq!(laplace_beltrami(&f, &frame).unwrap().value(), 2.0);

        // unit sphere, first spherical harmonic cos θ1 → −4 cos θ1
        let frame = build_frame(&sphere_phi(1.0, SPHERE_POINT, 4)).unwrap();
        let f = Jet::variable(0, SPHERE_POINT, 4).cos();
        let lap = laplace_beltrami(&f, &frame).unwrap();
        assert_relative_eq!(
            lap.value(),
            -4.0 * SPHERE_POINT[0].cos(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn metric_is_covariantly_constant() {
        let frame = build_frame(&sphere_phi(1.0, SPHERE_POINT, 4)).unwrap();
        let nabla_g = cov_derivative_sym2_lower(&frame.metric, &frame);
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert!(nabla_g[k][i][j].value().abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn flat_divergence_of_inverse_metric_row() {
        let frame = build_frame(&flat_phi([0.0; 4], 3)).unwrap();
        let x: [Jet; 4] = std::array::from_fn(|j| frame.inv_metric[j][0].clone());
        assert_relative_eq!(cov_divergence_vector(&x, &frame).value(), 0.0);
    }

    #[test]
    fn sphere_double_divergence_of_weighted_curvature() {
        // ∇_i∇_k(H² h^{ik}) = 0 on the round sphere (covariantly constant)
        let frame = build_frame(&sphere_phi(1.5, SPHERE_POINT, 6)).unwrap();
        let curv = curvature(&frame).unwrap();
        let h2 = &curv.mean * &curv.mean;
        let t: [[Jet; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|k| &h2 * &curv.h_upper(&frame)[i][k]));
        let x = cov_divergence_sym2_upper(&t, &frame);
        let div = cov_divergence_vector(&x, &frame);
        assert!(div.value().abs() < 1e-9);
    }

    #[test]
    fn contracted_codazzi_on_graph() {
        // ∇_i h^j_j = ∇_j h^j_i  (4 ∂_i H = g^{jk}∇_j h_{ki})
        let point = [0.25, -0.3, 0.45, 0.15];
        let x = |i: usize| Jet::variable(i, point, 5);
        let height = (x(0).sin() * x(1).cos()).scaled(0.4)
            + (x(2) * x(3) * x(0)).scaled(0.2)
            + (x(1) * x(1)).scaled(0.3);
        let phi: [Jet; 5] = [x(0), x(1), x(2), x(3), height];
        let frame = build_frame(&phi).unwrap();
        let curv = curvature(&frame).unwrap();
        let nabla_h = curv.nabla_h(&frame);
        for i in 0..4 {
            let lhs = 4.0 * curv.grad_mean[i].value();
            let mut rhs = 0.0;
            for j in 0..4 {
                for k in 0..4 {
                    rhs += frame.inv_metric[j][k].value() * nabla_h[j][k][i].value();
                }
            }
            let scale = 1.0 + lhs.abs().max(rhs.abs());
            assert!(
                (lhs - rhs).abs() / scale < 1e-8,
                "codazzi residual {} vs {}",
                lhs,
                rhs
            );
        }
    }

    #[test]
    fn trace_free_quartic_expansion() {
        // |h₀|⁴ = |h|⁴ − 8 H²|h|² + 16 H⁴
        let point = [0.4, 0.2, -0.5, 0.3];
        let x = |i: usize| Jet::variable(i, point, 4);
        let height = (x(0) * x(0)).scaled(0.35) + (x(1) * x(2)).scaled(-0.2) + x(3).sin().scaled(0.15);
        let phi: [Jet; 5] = [x(0), x(1), x(2), x(3), height];
        let curv = curvature(&build_frame(&phi).unwrap()).unwrap();
        let h2 = curv.norm_h_sq.value();
        let h0_sq = curv.norm_h0_sq.value();
        let hh = curv.mean.value() * curv.mean.value();
        let lhs = h0_sq * h0_sq;
        let rhs = h2 * h2 - 8.0 * hh * h2 + 16.0 * hh * hh;
        assert_relative_eq!(lhs, rhs, max_relative = 1e-11, epsilon = 1e-13);
    }

    #[test]
    fn scale_covariance_of_curvature() {
        let base = sphere_phi(1.0, SPHERE_POINT, 4);
        let c0 = curvature(&build_frame(&base).unwrap()).unwrap();
        for lambda in [0.5, 2.0] {
            let scaled: [Jet; 5] = std::array::from_fn(|a| base[a].scaled(lambda));
            let c = curvature(&build_frame(&scaled).unwrap()).unwrap();
            assert_relative_eq!(
                c.mean.value(),
                c0.mean.value() / lambda,
                max_relative = 1e-11
            );
            assert_relative_eq!(
                c.norm_h_sq.value(),
                c0.norm_h_sq.value() / (lambda * lambda),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn insufficient_degree_paths() {
        let phi = flat_phi([0.0; 4], 2);
        let frame = build_frame(&phi).unwrap();
        assert!(matches!(
            curvature(&frame),
            Err(GeometryError::InsufficientDegree { .. })
        ));

        let phi = sphere_phi(1.0, SPHERE_POINT, 4);
        let frame = build_frame(&phi).unwrap();
        let curv = curvature(&frame).unwrap();
        assert!(curv.laplace_mean(&frame).is_ok());
        assert!(curv.bilaplace_mean(&frame).is_err());
    }
}
