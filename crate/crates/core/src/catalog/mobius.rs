//! Möbius transformations of the ambient 5-space: ordered compositions of
//! translations, rotations, dilations and sphere inversions, applied to
//! immersion jets through jet arithmetic.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::jets::Jet;

/// Inversion centers must keep this distance from the surface itself; the
/// invariance experiments enforce it by sampling before integrating.
pub const MIN_INVERSION_DISTANCE: f64 = 0.5;

/// Hard conditioning floor for jet evaluation: intermediate factors of a
/// composition (a double inversion, say) may legitimately pass nearer the
/// center than the experiment margin, but this close is singular.
pub const HARD_SINGULARITY_DISTANCE: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub enum MobiusFactor {
    Translation { offset: [f64; 5] },
    Rotation { matrix: [[f64; 5]; 5] },
    Dilation { factor: f64 },
    Inversion { center: [f64; 5], radius: f64 },
}

/// An ordered composition of conformal factors (applied first to last).
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MobiusTransform {
    pub factors: Vec<MobiusFactor>,
}

impl MobiusTransform {
    pub fn identity() -> Self {
        MobiusTransform::default()
    }

    pub fn translation(offset: [f64; 5]) -> Self {
        Self {
            factors: vec![MobiusFactor::Translation { offset }],
        }
    }

    pub fn dilation(factor: f64) -> Self {
        assert!(factor > 0.0, "dilation factor must be positive");
        Self {
            factors: vec![MobiusFactor::Dilation { factor }],
        }
    }

    pub fn rotation(matrix: [[f64; 5]; 5]) -> Self {
        debug_assert!(is_orthogonal(&matrix), "rotation matrix must be orthogonal");
        Self {
            factors: vec![MobiusFactor::Rotation { matrix }],
        }
    }

    pub fn inversion(center: [f64; 5], radius: f64) -> Self {
        assert!(radius > 0.0, "inversion radius must be positive");
        Self {
            factors: vec![MobiusFactor::Inversion { center, radius }],
        }
    }

    pub fn then(mut self, other: MobiusTransform) -> Self {
        self.factors.extend(other.factors);
        self
    }

    pub fn apply_jets(&self, phi: &[Jet; 5]) -> Result<[Jet; 5], CatalogError> {
        let mut x = phi.clone();
        for factor in &self.factors {
            x = apply_factor_jets(factor, &x)?;
        }
        Ok(x)
    }

    pub fn apply_point(&self, p: [f64; 5]) -> Result<[f64; 5], CatalogError> {
        let mut x = p;
        for factor in &self.factors {
            x = apply_factor_point(factor, x)?;
        }
        Ok(x)
    }
}

fn apply_factor_jets(factor: &MobiusFactor, x: &[Jet; 5]) -> Result<[Jet; 5], CatalogError> {
    match factor {
        MobiusFactor::Translation { offset } => Ok(std::array::from_fn(|a| {
            &x[a] + Jet::constant_any(offset[a])
        })),
        MobiusFactor::Dilation { factor } => Ok(std::array::from_fn(|a| x[a].scaled(*factor))),
        MobiusFactor::Rotation { matrix } => Ok(std::array::from_fn(|a| {
            let mut acc = Jet::zero_value();
            for b in 0..5 {
                if matrix[a][b] != 0.0 {
                    acc = acc + x[b].scaled(matrix[a][b]);
                }
            }
            acc
        })),
        MobiusFactor::Inversion { center, radius } => {
            let d: [Jet; 5] =
                std::array::from_fn(|a| &x[a] - Jet::constant_any(center[a]));
            let mut s = Jet::zero_value();
            for da in &d {
                s = s + da * da;
            }
            let dist = s.value().sqrt();
            if dist < HARD_SINGULARITY_DISTANCE {
                return Err(CatalogError::SingularTransform {
                    distance: dist,
                    required: HARD_SINGULARITY_DISTANCE,
                });
            }
            let r = s.try_recip().map_err(crate::geometry::GeometryError::from)?;
            let rho2 = radius * radius;
            Ok(std::array::from_fn(|a| {
                Jet::constant_any(center[a]) + (&d[a] * &r).scaled(rho2)
            }))
        }
    }
}

fn apply_factor_point(factor: &MobiusFactor, x: [f64; 5]) -> Result<[f64; 5], CatalogError> {
    match factor {
        MobiusFactor::Translation { offset } => Ok(std::array::from_fn(|a| x[a] + offset[a])),
        MobiusFactor::Dilation { factor } => Ok(std::array::from_fn(|a| x[a] * factor)),
        MobiusFactor::Rotation { matrix } => Ok(std::array::from_fn(|a| {
            (0..5).map(|b| matrix[a][b] * x[b]).sum()
        })),
        MobiusFactor::Inversion { center, radius } => {
            let d: [f64; 5] = std::array::from_fn(|a| x[a] - center[a]);
            let s: f64 = d.iter().map(|v| v * v).sum();
            let dist = s.sqrt();
            if dist < HARD_SINGULARITY_DISTANCE {
                return Err(CatalogError::SingularTransform {
                    distance: dist,
                    required: HARD_SINGULARITY_DISTANCE,
                });
            }
            Ok(std::array::from_fn(|a| {
                center[a] + radius * radius * d[a] / s
            }))
        }
    }
}

fn is_orthogonal(m: &[[f64; 5]; 5]) -> bool {
    for i in 0..5 {
        for j in 0..5 {
            let dot: f64 = (0..5).map(|k| m[i][k] * m[j][k]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - expect).abs() > 1e-10 {
                return false;
            }
        }
    }
    true
}

/// Random special-orthogonal 5×5 matrix by Gram–Schmidt on Gaussian columns.
pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 5]; 5] {
    loop {
        let mut m = [[0.0f64; 5]; 5];
        for row in &mut m {
            for v in row.iter_mut() {
                // Box–Muller
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                *v = (-2.0 * u1.ln()).sqrt() * u2.cos();
            }
        }
        let mut ok = true;
        for i in 0..5 {
            for j in 0..i {
                let dot: f64 = (0..5).map(|k| m[i][k] * m[j][k]).sum();
                for k in 0..5 {
                    m[i][k] -= dot * m[j][k];
                }
            }
            let norm: f64 = (0..5).map(|k| m[i][k] * m[i][k]).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for k in 0..5 {
                m[i][k] /= norm;
            }
        }
        if ok {
            return m;
        }
    }
}

impl Jet {
    /// A zero that participates in sums regardless of degree bookkeeping.
    pub(crate) fn zero_value() -> Jet {
        Jet::constant_any(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    #[test]
    fn unit_inversion_fixes_unit_points() {
        // x ↦ x/|x|² fixes (1,0,0,0,0); as jets, the constant jet maps to itself
        let inv = MobiusTransform::inversion([0.0; 5], 1.0);
        let point = [0.2, 0.4, 0.8, 0.6];
        let phi: [Jet; 5] = std::array::from_fn(|a| {
            Jet::constant(if a == 0 { 1.0 } else { 0.0 }, point, 3)
        });
        let image = inv.apply_jets(&phi).unwrap();
        for a in 0..5 {
            assert_relative_eq!(image[a].value(), phi[a].value(), epsilon = 1e-15);
        }
    }

    #[test]
    fn dilation_scales_coefficients() {
        let point = [0.1, 0.2, 0.3, 0.4];
        let phi: [Jet; 5] = std::array::from_fn(|a| {
            if a < 4 {
                Jet::variable(a, point, 3)
            } else {
                Jet::constant(0.0, point, 3)
            }
        });
        let image = MobiusTransform::dilation(2.0).apply_jets(&phi).unwrap();
        for a in 0..4 {
            assert_relative_eq!(image[a].value(), 2.0 * phi[a].value());
            assert_relative_eq!(
                image[a].coeff(&{
                    let mut e = [0u8; 4];
                    e[a] = 1;
                    e
                }),
                2.0
            );
        }
    }

    #[test]
    fn double_inversion_is_identity_on_jets() {
        let point = [0.3, 0.7, 0.5, 0.9];
        let phi: [Jet; 5] = std::array::from_fn(|a| {
            if a < 4 {
                Jet::variable(a, point, 4) + Jet::constant_any(1.5)
            } else {
                Jet::constant(0.2, point, 4)
            }
        });
        let c = [4.0, 0.0, 0.0, 0.0, 0.0];
        let t = MobiusTransform::inversion(c, 1.3).then(MobiusTransform::inversion(c, 1.3));
        let image = t.apply_jets(&phi).unwrap();
        for a in 0..5 {
            for alpha in crate::jets::multi_indices().iter() {
                if crate::jets::total_degree(alpha) > 4 {
                    continue;
                }
                let got = image[a].coeff(alpha);
                let expect = phi[a].coeff(alpha);
                assert!(
                    (got - expect).abs() <= 1e-10 * (1.0 + expect.abs()),
                    "component {a} at {alpha:?}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn close_inversion_center_is_rejected() {
        let point = [0.0; 4];
        let phi: [Jet; 5] = std::array::from_fn(|a| Jet::constant(a as f64 * 0.001, point, 2));
        let t = MobiusTransform::inversion([0.0; 5], 1.0);
        assert!(matches!(
            t.apply_jets(&phi),
            Err(CatalogError::SingularTransform { .. })
        ));
    }

    #[test]
    fn random_rotations_are_orthogonal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = random_rotation(&mut rng);
            assert!(is_orthogonal(&m));
        }
    }
}
