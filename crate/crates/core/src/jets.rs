//! Truncated multivariate Taylor arithmetic ("jets") in 4 chart variables.
//!
//! A [`Jet`] stores the Taylor coefficients `∂^α f / α!` of a function of the
//! chart coordinates about a fixed expansion point, for every multi-index `α`
//! with `|α| <= K`, `K <= 6`. Arithmetic on jets produces the jet of the
//! corresponding function exactly (to rounding), so sixth-order differential
//! operators evaluate without any truncation error beyond f64 rounding.
//!
//! Degree bookkeeping: the degree of a jet is the highest total order whose
//! coefficients are trustworthy. Binary operations return the minimum of the
//! operand degrees; differentiation lowers the degree by one. Requesting a
//! partial beyond the degree is an error, never a silent zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::scalar::Scalar;

/// Number of chart variables.
pub const NVARS: usize = 4;
/// Hard cap on the jet degree. Degree 6 closes the operator stack:
/// Φ at 6 → H at 4 → Δ²H at 0, and stress tensors at 1 → divergences at 0.
pub const MAX_DEGREE: usize = 6;

/// Sentinel degree for context-free constants (see [`Jet::constant_any`]).
const DEGREE_ANY: u8 = u8::MAX;

/// A multi-index over the 4 chart variables.
pub type MultiIndex = [u8; NVARS];

/// Number of multi-indices of total degree exactly `d` in 4 variables.
fn count_of_degree(d: usize) -> usize {
    // C(d+3, 3)
    (d + 1) * (d + 2) * (d + 3) / 6
}

/// Number of coefficients of a jet of degree `k`.
pub fn coeff_count(k: usize) -> usize {
    // C(k+4, 4)
    (0..=k).map(count_of_degree).sum()
}

struct IndexTables {
    /// All multi-indices with |α| <= MAX_DEGREE, graded lexicographic.
    midx: Vec<MultiIndex>,
    /// Position of a multi-index, addressed as a flat 7^4 array.
    pos: Vec<u16>,
    /// pair[i * len + j] = position of midx[i] + midx[j], or u16::MAX when
    /// the sum exceeds MAX_DEGREE. Keeps the product kernel free of index
    /// arithmetic.
    pair: Vec<u16>,
}

fn flat(alpha: &MultiIndex) -> usize {
    let m = MAX_DEGREE + 1;
    ((alpha[0] as usize * m + alpha[1] as usize) * m + alpha[2] as usize) * m + alpha[3] as usize
}

static TABLES: Lazy<IndexTables> = Lazy::new(|| {
    let mut midx = Vec::with_capacity(coeff_count(MAX_DEGREE));
    for total in 0..=MAX_DEGREE {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                for c in (0..=total - a - b).rev() {
                    let d = total - a - b - c;
                    midx.push([a as u8, b as u8, c as u8, d as u8]);
                }
            }
        }
    }
    let m = MAX_DEGREE + 1;
    let mut pos = vec![u16::MAX; m * m * m * m];
    for (i, alpha) in midx.iter().enumerate() {
        pos[flat(alpha)] = i as u16;
    }
    let n = midx.len();
    let mut pair = vec![u16::MAX; n * n];
    for (i, a) in midx.iter().enumerate() {
        for (j, b) in midx.iter().enumerate() {
            if total_degree(a) + total_degree(b) <= MAX_DEGREE {
                let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                pair[i * n + j] = pos[flat(&sum)];
            }
        }
    }
    IndexTables { midx, pos, pair }
});

/// The multi-indices with `|α| <= MAX_DEGREE` in storage order.
pub fn multi_indices() -> &'static [MultiIndex] {
    &TABLES.midx
}

/// Storage position of `alpha`; panics if `|alpha| > MAX_DEGREE`.
pub fn index_of(alpha: &MultiIndex) -> usize {
    let p = TABLES.pos[flat(alpha)];
    debug_assert!(p != u16::MAX);
    p as usize
}

pub fn total_degree(alpha: &MultiIndex) -> usize {
    alpha.iter().map(|&a| a as usize).sum()
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

/// `α! = α₁!·α₂!·α₃!·α₄!`
pub fn multi_factorial(alpha: &MultiIndex) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("division by a jet with zero constant term")]
    DivisionBySingular,
    #[error("sqrt of a jet with nonpositive constant term ({0})")]
    SqrtDomain(f64),
    #[error("pow of a jet with nonpositive constant term ({0})")]
    PowDomain(f64),
    #[error("partial of order {requested} requested from a degree-{available} jet")]
    InsufficientOrder { requested: usize, available: usize },
    #[error("jet degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooHigh(usize),
}

/// Truncated Taylor expansion of a scalar function of the chart coordinates.
///
/// `coeffs[i]` is `∂^α f / α!` at the expansion point for `α = multi_indices()[i]`.
#[derive(Clone, PartialEq)]
pub struct Jet {
    point: [f64; NVARS],
    degree: u8,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_const() {
            write!(f, "Jet(const {})", self.coeffs[0])
        } else {
            write!(
                f,
                "Jet(deg {}, value {}, at {:?})",
                self.degree, self.coeffs[0], self.point
            )
        }
    }
}

impl Jet {
    /// Constant jet of a declared degree at a chart point.
    pub fn constant(value: f64, point: [f64; NVARS], degree: usize) -> Jet {
        assert!(degree <= MAX_DEGREE);
        let mut coeffs = vec![0.0; coeff_count(degree)];
        coeffs[0] = value;
        Jet {
            point,
            degree: degree as u8,
            coeffs,
        }
    }

    /// Context-free constant: combines with jets of any degree and any
    /// expansion point. This is the additive/multiplicative identity carrier
    /// required by the [`Scalar`] trait.
    pub fn constant_any(value: f64) -> Jet {
        Jet {
            point: [0.0; NVARS],
            degree: DEGREE_ANY,
            coeffs: vec![value],
        }
    }

    /// The jet of the coordinate function `x^i` about `point`.
    pub fn variable(i: usize, point: [f64; NVARS], degree: usize) -> Jet {
        assert!(i < NVARS && degree <= MAX_DEGREE);
        let mut out = Jet::constant(point[i], point, degree);
        if degree >= 1 {
            let mut e = [0u8; NVARS];
            e[i] = 1;
            out.coeffs[index_of(&e)] = 1.0;
        }
        out
    }

    pub fn is_const(&self) -> bool {
        self.degree == DEGREE_ANY
    }

    /// Trustworthy order count. Context-free constants report `MAX_DEGREE`.
    pub fn degree(&self) -> usize {
        if self.is_const() {
            MAX_DEGREE
        } else {
            self.degree as usize
        }
    }

    pub fn point(&self) -> [f64; NVARS] {
        self.point
    }

    /// Function value at the expansion point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `∂^α f / α!`, zero when `|α| > 0` on a constant.
    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        if self.is_const() {
            return if total_degree(alpha) == 0 {
                self.coeffs[0]
            } else {
                0.0
            };
        }
        if total_degree(alpha) > self.degree as usize {
            return 0.0;
        }
        self.coeffs[index_of(alpha)]
    }

    /// The partial derivative `∂^α f` at the expansion point (`α!` times the
    /// stored coefficient). Errs when the jet does not carry order `|α|`.
    pub fn extract_partial(&self, alpha: &MultiIndex) -> Result<f64, JetError> {
        let order = total_degree(alpha);
        if order > self.degree() {
            return Err(JetError::InsufficientOrder {
                requested: order,
                available: self.degree(),
            });
        }
        Ok(multi_factorial(alpha) * self.coeff(alpha))
    }

    /// Jet of `∂f/∂x^i`; degree drops by one.
    pub fn derivative(&self, i: usize) -> Jet {
        assert!(i < NVARS);
        if self.is_const() {
            return Jet::constant_any(0.0);
        }
        assert!(self.degree >= 1, "cannot differentiate a degree-0 jet");
        let k = self.degree as usize - 1;
        let mut out = Jet {
            point: self.point,
            degree: k as u8,
            coeffs: vec![0.0; coeff_count(k)],
        };
        for (j, alpha) in TABLES.midx[..coeff_count(k)].iter().enumerate() {
            let mut up = *alpha;
            up[i] += 1;
            out.coeffs[j] = (up[i] as f64) * self.coeffs[index_of(&up)];
        }
        out
    }

    /// Polynomial evaluation of the stored expansion at `point + delta`.
    pub fn eval_offset(&self, delta: [f64; NVARS]) -> f64 {
        if self.is_const() {
            return self.coeffs[0];
        }
        let mut acc = 0.0;
        for (i, alpha) in TABLES.midx[..self.coeffs.len()].iter().enumerate() {
            let mut m = self.coeffs[i];
            for v in 0..NVARS {
                for _ in 0..alpha[v] {
                    m *= delta[v];
                }
            }
            acc += m;
        }
        acc
    }

    fn check_compatible(&self, other: &Jet) {
        if !self.is_const() && !other.is_const() {
            debug_assert_eq!(
                self.point, other.point,
                "jet arithmetic requires a common expansion point"
            );
        }
    }

    fn add_impl(&self, other: &Jet, sign: f64) -> Jet {
        self.check_compatible(other);
        if self.is_const() && other.is_const() {
            return Jet::constant_any(self.coeffs[0] + sign * other.coeffs[0]);
        }
        if self.is_const() {
            let mut out = if sign == 1.0 {
                other.clone()
            } else {
                other.scaled(sign)
            };
            out.coeffs[0] += self.coeffs[0];
            return out;
        }
        if other.is_const() {
            let mut out = self.clone();
            out.coeffs[0] += sign * other.coeffs[0];
            return out;
        }
        let k = (self.degree as usize).min(other.degree as usize);
        let n = coeff_count(k);
        let mut coeffs = vec![0.0; n];
        for (c, (a, b)) in coeffs
            .iter_mut()
            .zip(self.coeffs.iter().zip(&other.coeffs))
        {
            *c = a + sign * b;
        }
        Jet {
            point: self.point,
            degree: k as u8,
            coeffs,
        }
    }

    fn mul_impl(&self, other: &Jet) -> Jet {
        self.check_compatible(other);
        if self.is_const() {
            return other.scaled(self.coeffs[0]);
        }
        if other.is_const() {
            return self.scaled(other.coeffs[0]);
        }
        let k = (self.degree as usize).min(other.degree as usize);
        let n = coeff_count(k);
        let mut coeffs = vec![0.0; n];
        let t = &*TABLES;
        let stride = t.midx.len();
        let na = self.coeffs.len().min(n);
        let nb_full = other.coeffs.len().min(n);
        for i in 0..na {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let row = &t.pair[i * stride..i * stride + nb_full];
            let pair_limit = coeff_count(k - total_degree(&t.midx[i])).min(nb_full);
            for j in 0..pair_limit {
                let target = row[j];
                coeffs[target as usize] += a * other.coeffs[j];
            }
        }
        Jet {
            point: self.point,
            degree: k as u8,
            coeffs,
        }
    }

    pub fn scaled(&self, factor: f64) -> Jet {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= factor;
        }
        out
    }

    /// Nilpotent part (expansion minus its constant term).
    fn nilpotent(&self) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] = 0.0;
        out
    }

    /// Composes a univariate Taylor series `sum_k series[k] * u^k` with the
    /// nilpotent part `u` of this jet (Horner form, truncation is exact).
    fn compose_series(&self, series: &[f64]) -> Jet {
        if self.is_const() {
            return Jet::constant_any(series[0]);
        }
        let u = self.nilpotent();
        let k = self.degree();
        let mut acc = Jet::constant(series[k], self.point, k);
        for d in (0..k).rev() {
            acc = acc.mul_impl(&u);
            acc.coeffs[0] += series[d];
        }
        acc
    }

    /// Taylor coefficients of the outer function at the constant term, for
    /// orders `0..=degree`.
    fn degree_for_series(&self) -> usize {
        self.degree()
    }

    pub fn sin(&self) -> Jet {
        let c = self.value();
        let k = self.degree_for_series();
        let series: Vec<f64> = (0..=k)
            .map(|m| (c + m as f64 * std::f64::consts::FRAC_PI_2).sin() / factorial(m as u8))
            .collect();
        self.compose_series(&series)
    }

    pub fn cos(&self) -> Jet {
        let c = self.value();
        let k = self.degree_for_series();
        let series: Vec<f64> = (0..=k)
            .map(|m| (c + m as f64 * std::f64::consts::FRAC_PI_2).cos() / factorial(m as u8))
            .collect();
        self.compose_series(&series)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let k = self.degree_for_series();
        let series: Vec<f64> = (0..=k).map(|m| e / factorial(m as u8)).collect();
        self.compose_series(&series)
    }

    /// Generalized binomial series for `t^r` about the constant term.
    fn pow_series(&self, r: f64) -> Vec<f64> {
        let c = self.value();
        let k = self.degree_for_series();
        let mut series = Vec::with_capacity(k + 1);
        // series[m] = binom(r, m) * c^(r-m)
        let mut binom = 1.0;
        for m in 0..=k {
            series.push(binom * c.powf(r - m as f64));
            binom *= (r - m as f64) / (m as f64 + 1.0);
        }
        series
    }

    pub fn try_sqrt(&self) -> Result<Jet, JetError> {
        if self.value() <= 0.0 {
            return Err(JetError::SqrtDomain(self.value()));
        }
        Ok(self.compose_series(&self.pow_series(0.5)))
    }

    pub fn try_powf(&self, r: f64) -> Result<Jet, JetError> {
        if self.value() <= 0.0 {
            return Err(JetError::PowDomain(self.value()));
        }
        Ok(self.compose_series(&self.pow_series(r)))
    }

    pub fn try_recip(&self) -> Result<Jet, JetError> {
        let c = self.value();
        if c == 0.0 {
            return Err(JetError::DivisionBySingular);
        }
        let k = self.degree_for_series();
        let mut series = Vec::with_capacity(k + 1);
        let mut term = 1.0 / c;
        for _ in 0..=k {
            series.push(term);
            term *= -1.0 / c;
        }
        Ok(self.compose_series(&series))
    }

    /// `sqrt` asserting the domain; use [`Jet::try_sqrt`] at module boundaries.
    pub fn sqrt(&self) -> Jet {
        self.try_sqrt().expect("jet sqrt domain")
    }

    pub fn recip(&self) -> Jet {
        self.try_recip().expect("jet division by singular")
    }

    pub fn powi(&self, n: u32) -> Jet {
        match n {
            0 => Jet::constant_any(1.0),
            _ => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.mul_impl(self);
                }
                acc
            }
        }
    }
}

/// Applies an analytic self-map of the ambient 5-space to an immersion jet,
/// in jet arithmetic, yielding the jet of the composed immersion.
pub fn compose_ambient<E, F>(map: F, phi: &[Jet; 5]) -> Result<[Jet; 5], E>
where
    F: FnOnce(&[Jet; 5]) -> Result<[Jet; 5], E>,
{
    map(phi)
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $impl:ident $(, $sign:expr)?) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$impl(rhs $(, $sign)?)
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$impl(&rhs $(, $sign)?)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$impl(rhs $(, $sign)?)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$impl(&rhs $(, $sign)?)
            }
        }
    };
}

jet_binop!(Add, add, add_impl, 1.0);
jet_binop!(Sub, sub, add_impl, -1.0);
jet_binop!(Mul, mul, mul_impl);

impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.mul_impl(&rhs.recip())
    }
}
impl Div<Jet> for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        (&self).div(&rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}
impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}

impl Scalar for Jet {
    fn zero() -> Self {
        Jet::constant_any(0.0)
    }
    fn one() -> Self {
        Jet::constant_any(1.0)
    }
    fn from_f64(v: f64) -> Self {
        Jet::constant_any(v)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_impl(other, 1.0)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add_impl(other, -1.0)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }
    fn neg(&self) -> Self {
        self.scaled(-1.0)
    }
    fn scale(&self, factor: f64) -> Self {
        self.scaled(factor)
    }
    fn is_zero(&self) -> bool {
        self.is_const() && self.coeffs[0] == 0.0
    }
    fn value(&self) -> f64 {
        self.coeffs[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const ORIGIN: [f64; 4] = [0.0; 4];

    #[test]
    fn index_tables_are_consistent() {
        assert_eq!(multi_indices().len(), 210);
        assert_eq!(coeff_count(6), 210);
        for (i, alpha) in multi_indices().iter().enumerate() {
            assert_eq!(index_of(alpha), i);
        }
    }

    #[test]
    fn product_of_two_variables() {
        let x = Jet::variable(0, ORIGIN, 2);
        let y = Jet::variable(1, ORIGIN, 2);
        let p = &x * &y;
        assert_eq!(p.coeff(&[1, 1, 0, 0]), 1.0);
        let nonzero: usize = multi_indices()
            .iter()
            .filter(|a| total_degree(a) <= 2 && p.coeff(a) != 0.0)
            .count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn geometric_series_from_division() {
        // 1 / (1 + x1) at 0, degree 3: coefficients 1, -1, 1, -1 on powers of x1.
        let one = Jet::constant(1.0, ORIGIN, 3);
        let denom = Jet::constant(1.0, ORIGIN, 3) + Jet::variable(0, ORIGIN, 3);
        let q = &one / &denom;
        for (k, expect) in [1.0, -1.0, 1.0, -1.0].iter().enumerate() {
            assert_relative_eq!(q.coeff(&[k as u8, 0, 0, 0]), expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn addition_identity() {
        let x = Jet::variable(2, [0.5, 0.0, -1.0, 2.0], 4);
        let z = Jet::zero();
        let s = x.clone() + z;
        assert_eq!(s, x);
    }

    #[test]
    fn sin_maclaurin() {
        let x = Jet::variable(0, ORIGIN, 3);
        let s = x.sin();
        assert_relative_eq!(s.coeff(&[0, 0, 0, 0]), 0.0);
        assert_relative_eq!(s.coeff(&[1, 0, 0, 0]), 1.0);
        assert_relative_eq!(s.coeff(&[2, 0, 0, 0]), 0.0);
        assert_relative_eq!(s.coeff(&[3, 0, 0, 0]), -1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn sqrt_binomial_series() {
        let f = Jet::constant(1.0, ORIGIN, 2) + Jet::variable(0, ORIGIN, 2);
        let s = f.try_sqrt().unwrap();
        assert_relative_eq!(s.coeff(&[0, 0, 0, 0]), 1.0);
        assert_relative_eq!(s.coeff(&[1, 0, 0, 0]), 0.5);
        assert_relative_eq!(s.coeff(&[2, 0, 0, 0]), -0.125);
    }

    #[test]
    fn exp_of_zero() {
        let z = Jet::constant(0.0, ORIGIN, 4);
        let e = z.exp();
        assert_eq!(e.value(), 1.0);
        for alpha in multi_indices().iter().filter(|a| total_degree(a) >= 1) {
            assert_eq!(e.coeff(alpha), 0.0);
        }
    }

    #[test]
    fn extract_partial_values() {
        let x = Jet::variable(0, ORIGIN, 4);
        let y = Jet::variable(1, ORIGIN, 4);
        let f = &x * &y;
        assert_eq!(f.extract_partial(&[1, 1, 0, 0]).unwrap(), 1.0);
        assert_eq!(f.extract_partial(&[0, 0, 0, 0]).unwrap(), 0.0);

        let s = Jet::variable(0, ORIGIN, 4).sin();
        assert_relative_eq!(s.extract_partial(&[3, 0, 0, 0]).unwrap(), -1.0);
    }

    #[test]
    fn insufficient_order_is_an_error() {
        let f = Jet::variable(0, ORIGIN, 2);
        let err = f.extract_partial(&[3, 0, 0, 0]).unwrap_err();
        assert_eq!(
            err,
            JetError::InsufficientOrder {
                requested: 3,
                available: 2
            }
        );
    }

    #[test]
    fn division_by_singular_jet_fails() {
        let x = Jet::variable(0, ORIGIN, 3);
        assert_eq!(x.try_recip().unwrap_err(), JetError::DivisionBySingular);
    }

    #[test]
    fn sqrt_domain_error() {
        let f = Jet::constant(-2.0, ORIGIN, 3);
        assert!(matches!(f.try_sqrt(), Err(JetError::SqrtDomain(_))));
    }

    #[test]
    fn degree_bookkeeping() {
        let x = Jet::variable(0, ORIGIN, 6);
        let d = x.derivative(0);
        assert_eq!(d.degree(), 5);
        let p = &d * &x;
        assert_eq!(p.degree(), 5);
    }

    /// Leibniz rule: every partial of a product of random polynomial jets
    /// matches the binomial expansion over sub-multi-indices exactly.
    #[test]
    fn leibniz_rule_on_random_polynomials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let point = [0.3, -0.2, 0.1, 0.4];
        for _ in 0..20 {
            let mut f = Jet::constant(0.0, point, 4);
            let mut g = Jet::constant(0.0, point, 4);
            for _ in 0..6 {
                let i = rng.gen_range(0..4);
                let j = rng.gen_range(0..4);
                let a: i32 = rng.gen_range(-3..=3);
                let b: i32 = rng.gen_range(-3..=3);
                let xi = Jet::variable(i, point, 4);
                let xj = Jet::variable(j, point, 4);
                f = f + (&xi * &xj).scaled(a as f64);
                g = g + xj.scaled(b as f64) + xi;
            }
            let p = &f * &g;
            for alpha in multi_indices().iter().filter(|a| total_degree(a) <= 4) {
                let direct = p.extract_partial(alpha).unwrap();
                // Leibniz: ∂^α(fg) = Σ_{β<=α} C(α,β) ∂^β f ∂^{α-β} g
                let mut acc = 0.0;
                for beta in multi_indices().iter() {
                    if beta.iter().zip(alpha).any(|(b, a)| b > a) {
                        continue;
                    }
                    let gamma = [
                        alpha[0] - beta[0],
                        alpha[1] - beta[1],
                        alpha[2] - beta[2],
                        alpha[3] - beta[3],
                    ];
                    let choose = multi_factorial(alpha)
                        / (multi_factorial(beta) * multi_factorial(&gamma));
                    acc += choose
                        * f.extract_partial(beta).unwrap()
                        * g.extract_partial(&gamma).unwrap();
                }
                assert_relative_eq!(direct, acc, epsilon = 1e-9, max_relative = 1e-9);
            }
        }
    }
}
