//! Immersion catalog, Möbius transformations and chart quadrature.

use thiserror::Error;

pub mod expr;
pub mod immersion;
pub mod mobius;
pub mod quad;
pub mod random;

pub use expr::Expr;
pub use immersion::{ChartDomain, ImmersionSpec};
pub use mobius::{MobiusFactor, MobiusTransform};
pub use quad::{
    integrate, mobius_invariance_experiment, AtlasSpec, GridSpec, InvarianceOutcome, QuadChart,
    QuadratureResult,
};
pub use random::random_immersion;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("chart point {point:?} lies outside the declared domain of {spec}")]
    OutsideDomain { point: [f64; 4], spec: String },
    #[error(
        "inversion center too close to the image: distance {distance:.3}, required {required}"
    )]
    SingularTransform { distance: f64, required: f64 },
    #[error("cannot parse immersion `{text}`: {message}")]
    BadSpec { text: String, message: String },
    #[error(transparent)]
    Expr(#[from] expr::ExprError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}
