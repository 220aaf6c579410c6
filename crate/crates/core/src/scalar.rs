//! The scalar ring abstraction that lets the exterior algebra run over plain
//! `f64` values and over [`Jet`](crate::jets::Jet)s with the same code.

/// Ring operations needed by the multivector and chart-form algebra.
///
/// Implementors must provide a *universal* zero and one: values that act as
/// the additive/multiplicative identity regardless of the context (for jets,
/// these are context-free constants that combine with jets of any degree).
pub trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiply by a plain real constant.
    fn scale(&self, factor: f64) -> Self;

    /// Exact structural zero test (used only for early exits, never for
    /// numerical tolerance decisions).
    fn is_zero(&self) -> bool;

    /// The value of the scalar itself (constant term for jets).
    fn value(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, factor: f64) -> Self {
        self * factor
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn value(&self) -> f64 {
        *self
    }
}
