//! Energy densities, the sixth-order Euler–Lagrange operator, the competing
//! quartic-curvature operator, the divergence identity that exercises the
//! whole covariant stack, and the nonnegativity threshold analysis.
//!
//! All operators are evaluated in their codimension-1 scalar form: the mean
//! curvature vector is H n, the second fundamental form is the scalar h_ij,
//! and every Euler–Lagrange term is parallel to the unit normal. Signs of H
//! and h follow the chart orientation; energies use even powers and residuals
//! are reported in norm, so nothing downstream depends on the orientation.

use serde::{Deserialize, Serialize};

use crate::catalog::{integrate, AtlasSpec, CatalogError, GridSpec, ImmersionSpec, QuadratureResult};
use crate::geometry::{
    cov_divergence_sym2_upper, cov_divergence_vector, cov_hessian_scalar, laplace_beltrami,
    CurvaturePack, FramePack, GeometryError,
};
use crate::jets::Jet;

/// Pointwise energy density e = |∇H|² − H²|h|² + 7H⁴ with its term split.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DensityValue {
    pub total: f64,
    /// √det g at the point (the chart volume factor).
    pub sqrt_det_g: f64,
    /// |∇H|²
    pub grad_term: f64,
    /// −H²|h|²
    pub mixed_term: f64,
    /// +7H⁴
    pub quartic_term: f64,
}

pub fn energy_density(frame: &FramePack, curv: &CurvaturePack) -> DensityValue {
    let h_mean = curv.mean.value();
    let grad_term = curv.grad_mean_sq.value();
    let mixed_term = -h_mean * h_mean * curv.norm_h_sq.value();
    let quartic_term = 7.0 * h_mean.powi(4);
    DensityValue {
        total: grad_term + mixed_term + quartic_term,
        sqrt_det_g: frame.sqrt_det_g.value(),
        grad_term,
        mixed_term,
        quartic_term,
    }
}

/// The μ-augmented density e + μ|h₀|⁴, reported in both algebraic forms:
/// the defining form and |∇H|² + 3H⁴ − H²|h₀|² + μ|h₀|⁴; they agree
/// identically through |h|² = |h₀|² + 4H².
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MuDensityValue {
    pub base: DensityValue,
    pub mu: f64,
    /// μ|h₀|⁴
    pub mu_term: f64,
    pub total: f64,
    /// |∇H|² + 3H⁴ − H²|h₀|² + μ|h₀|⁴
    pub alternative_total: f64,
}

pub fn energy_density_mu(frame: &FramePack, curv: &CurvaturePack, mu: f64) -> MuDensityValue {
    let base = energy_density(frame, curv);
    let h_mean = curv.mean.value();
    let h0_sq = curv.norm_h0_sq.value();
    let mu_term = mu * h0_sq * h0_sq;
    let total = base.total + mu_term;
    let alternative_total = base.grad_term + 3.0 * h_mean.powi(4)
        - h_mean * h_mean * h0_sq
        + mu_term;
    MuDensityValue {
        base,
        mu,
        mu_term,
        total,
        alternative_total,
    }
}

/// The Euler–Lagrange operator value at a point, with the per-term breakdown
/// retained (11 terms, in the printed order):
///
/// ```text
///  0  −½ Δ²H                 5  −2 ∇_i∇_k(H² h^{ik})
///  1  −½ |h|² ΔH             6  −2 H² h^{ik}h_{mk}h^m_i
///  2  −4 |∇H|² H             7  −28 H⁵
///  3  +2 h^{ij} ∇_iH ∇_jH    8  −½ |h|⁴ H
///  4  −½ Δ(H|h|²)            9  +7 Δ(H³)
///                           10  +11 H³ |h|²
/// ```
///
/// The ambient vector is `scalar · n`; the scalar flips with orientation
/// while the vector and its norm do not.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WillmoreResidual {
    pub terms: [f64; 11],
    pub scalar: f64,
    pub vector: [f64; 5],
    pub norm: f64,
}

/// Evaluates the sixth-order operator. Requires immersion jets of degree 6.
pub fn willmore_operator(
    frame: &FramePack,
    curv: &CurvaturePack,
) -> Result<WillmoreResidual, GeometryError> {
    let h_mean = curv.mean.value();
    let h_sq = curv.norm_h_sq.value();
    let lap = curv.laplace_mean(frame)?.value();
    let bilap = curv.bilaplace_mean(frame)?.value();

    // Δ(H|h|²) and Δ(H³) as jets (degree 4 → degree 2 after the Laplacian)
    let h_hsq = &curv.mean * &curv.norm_h_sq;
    let lap_h_hsq = laplace_beltrami(&h_hsq, frame)?.value();
    let h_cubed = &curv.mean * &curv.mean * &curv.mean;
    let lap_h3 = laplace_beltrami(&h_cubed, frame)?.value();

    // ∇_i∇_k(H² h^{ik})
    let h2 = &curv.mean * &curv.mean;
    let h_upper = curv.h_upper(frame);
    let weighted: [[Jet; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|k| &h2 * &h_upper[i][k]));
    let div1 = cov_divergence_sym2_upper(&weighted, frame);
    let double_div = cov_divergence_vector(&div1, frame).value();

    let mut grad_contract = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            grad_contract +=
                h_upper[i][j].value() * curv.grad_mean[i].value() * curv.grad_mean[j].value();
        }
    }

    let terms = [
        -0.5 * bilap,
        -0.5 * h_sq * lap,
        -4.0 * curv.grad_mean_sq.value() * h_mean,
        2.0 * grad_contract,
        -0.5 * lap_h_hsq,
        -2.0 * double_div,
        -2.0 * h_mean * h_mean * curv.tr_h3().value(),
        -28.0 * h_mean.powi(5),
        -0.5 * h_sq * h_sq * h_mean,
        7.0 * lap_h3,
        11.0 * h_mean.powi(3) * h_sq,
    ];
    let scalar: f64 = terms.iter().sum();
    let vector: [f64; 5] = std::array::from_fn(|a| scalar * frame.normal[a].value());
    Ok(WillmoreResidual {
        terms,
        scalar,
        norm: scalar.abs(),
        vector,
    })
}

/// The Euler–Lagrange operator of the quartic energy ∫|h|⁴, in its
/// divergence form and, alongside, the form it reduces to on minimal
/// immersions; the two must agree whenever H ≡ 0.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct W3Evaluation {
    /// 4 h^{is}h_{ij}h^j_s |h|², −4|h|⁴H, 4 ∇_j∇_i(h^{ij}|h|²)
    pub terms: [f64; 3],
    /// Sum of the three terms (the operator in divergence form).
    pub scalar: f64,
    /// 4 Tr h³ |h|² + 4 h^{ij}∇_i∇_j|h|² (valid on H ≡ 0 inputs).
    pub minimal_form_scalar: f64,
    pub vector: [f64; 5],
    pub norm: f64,
}

/// Evaluates the quartic-energy operator. Requires jets of degree >= 4.
pub fn w3_operator(
    frame: &FramePack,
    curv: &CurvaturePack,
) -> Result<W3Evaluation, GeometryError> {
    if frame.degree < 4 {
        return Err(GeometryError::InsufficientDegree {
            needed: 4,
            available: frame.degree,
        });
    }
    let h_sq = curv.norm_h_sq.value();
    let h_mean = curv.mean.value();
    let tr3 = curv.tr_h3().value();

    let h_upper = curv.h_upper(frame);
    let weighted: [[Jet; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| &h_upper[i][j] * &curv.norm_h_sq)
    });
    let div1 = cov_divergence_sym2_upper(&weighted, frame);
    let double_div = cov_divergence_vector(&div1, frame).value();

    let terms = [
        4.0 * tr3 * h_sq,
        -4.0 * h_sq * h_sq * h_mean,
        4.0 * double_div,
    ];
    let scalar: f64 = terms.iter().sum();

    let hessian = cov_hessian_scalar(&curv.norm_h_sq, frame);
    let mut contracted = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            contracted += h_upper[i][j].value() * hessian[i][j].value();
        }
    }
    let minimal_form_scalar = 4.0 * tr3 * h_sq + 4.0 * contracted;

    let vector: [f64; 5] = std::array::from_fn(|a| scalar * frame.normal[a].value());
    Ok(W3Evaluation {
        terms,
        scalar,
        minimal_form_scalar,
        vector,
        norm: scalar.abs(),
    })
}

/// Residual of the divergence identity
///
/// ```text
/// ∇_s A^s = Δ_g H n + H|h|² n − 8H³ n,
/// A^s = ∇^s(H n) − 2(H² g^{sk} − H h^{sk}) ∂_kΦ
/// ```
///
/// which holds for *every* immersion, critical or not. A^s equals the
/// return-equation tensor T^s, so this check covers both. The left side is
/// assembled without any Weingarten simplification: the product rule acts
/// inside the jets, so the check exercises the full covariant stack.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DivergenceIdentityResidual {
    pub residual: [f64; 5],
    pub norm: f64,
    /// max(1, |h|)³ — the curvature scale of the identity's terms.
    pub scale: f64,
}

/// Requires jets of degree >= 4.
pub fn rivvy_residual(
    frame: &FramePack,
    curv: &CurvaturePack,
) -> Result<DivergenceIdentityResidual, GeometryError> {
    if frame.degree < 4 {
        return Err(GeometryError::InsufficientDegree {
            needed: 4,
            available: frame.degree,
        });
    }
    // H n as ambient jets
    let h_normal: [Jet; 5] = std::array::from_fn(|a| &curv.mean * &frame.normal[a]);
    let h2 = &curv.mean * &curv.mean;
    let h_upper = curv.h_upper(frame);

    // A^s_a = g^{sj} ∂_j(H n_a) − 2(H² g^{sk} − H h^{sk}) ∂_kΦ_a
    let a_field: [[Jet; 5]; 4] = std::array::from_fn(|s| {
        std::array::from_fn(|a| {
            let mut acc = Jet::zero();
            for j in 0..4 {
                acc = acc + &frame.inv_metric[s][j] * h_normal[a].derivative(j);
            }
            for k in 0..4 {
                let coeff = &h2 * &frame.inv_metric[s][k] - &curv.mean * &h_upper[s][k];
                acc = acc - coeff.scaled(2.0) * &frame.tangents[k][a];
            }
            acc
        })
    });
    let div = crate::geometry::cov_divergence_ambient(&a_field, frame);

    let rhs_scalar = curv.laplace_mean(frame)?.value()
        + curv.mean.value() * curv.norm_h_sq.value()
        - 8.0 * curv.mean.value().powi(3);

    let residual: [f64; 5] =
        std::array::from_fn(|a| div[a].value() - rhs_scalar * frame.normal[a].value());
    let norm = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(DivergenceIdentityResidual {
        residual,
        norm,
        scale: curvature_scale(curv).powi(3),
    })
}

/// max(1, |h|) at the point; identity tolerances scale with powers of it.
pub fn curvature_scale(curv: &CurvaturePack) -> f64 {
    curv.norm_h_sq.value().abs().sqrt().max(1.0)
}

/// Minimum of 3x² − xy + μy² on the unit circle, with a witness direction.
/// Nonnegative exactly when 3μ − ¼ ≥ 0, i.e. μ ≥ 1/12.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuadraticFormMin {
    pub min_value: f64,
    pub witness: [f64; 2],
}

pub fn quadratic_form_min(mu: f64) -> QuadraticFormMin {
    // smallest eigenvalue of [[3, -1/2], [-1/2, mu]]
    let half_trace = 0.5 * (3.0 + mu);
    let det = 3.0 * mu - 0.25;
    let gap = (half_trace * half_trace - det).sqrt();
    let min_value = half_trace - gap;
    // eigenvector: (3 − λ) x = y / 2
    let dir = [1.0, 2.0 * (3.0 - min_value)];
    let norm = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    QuadraticFormMin {
        min_value,
        witness: [dir[0] / norm, dir[1] / norm],
    }
}

pub fn quadratic_form_value(mu: f64, x: f64, y: f64) -> f64 {
    3.0 * x * x - x * y + mu * y * y
}

/// The local control energy ‖DH‖_{L²(Ω)} + ‖H‖_{L⁴(Ω)} over a chart region.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LocalEnergy {
    pub value: f64,
    pub grad_l2: f64,
    pub h_l4: f64,
    pub grad_quadrature: QuadratureResult,
    pub h_quadrature: QuadratureResult,
    pub converged: bool,
}

/// Quadrature of the two norms over `region` (or the full chart).
pub fn local_energy(
    spec: &ImmersionSpec,
    region: Option<[(f64, f64); 4]>,
    grid: &GridSpec,
    rel_tol: f64,
) -> Result<LocalEnergy, CatalogError> {
    let atlas = match region {
        Some(ranges) => AtlasSpec::region(spec, ranges),
        None => AtlasSpec::full_chart(spec),
    };
    let grad_quadrature = integrate(
        spec,
        3,
        &|_, c| Ok(c.grad_mean_sq.value()),
        &atlas,
        grid,
        rel_tol,
    )?;
    let h_quadrature = integrate(
        spec,
        3,
        &|_, c| Ok(c.mean.value().powi(4)),
        &atlas,
        grid,
        rel_tol,
    )?;
    let grad_l2 = grad_quadrature.value.max(0.0).sqrt();
    let h_l4 = h_quadrature.value.max(0.0).powf(0.25);
    Ok(LocalEnergy {
        value: grad_l2 + h_l4,
        grad_l2,
        h_l4,
        converged: grad_quadrature.converged && h_quadrature.converged,
        grad_quadrature,
        h_quadrature,
    })
}
