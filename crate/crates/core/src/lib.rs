//! Numerical verification engine for a conformally invariant Willmore-type
//! energy of 4-dimensional hypersurfaces immersed in 5-space.
//!
//! The engine evaluates, on analytic immersions given by exact truncated
//! Taylor (jet) arithmetic:
//!
//! - the energy density `|∇H|² − H²|h|² + 7H⁴` and its integrals,
//! - the sixth-order Euler–Lagrange operator of that energy (11 terms,
//!   retained term-by-term),
//! - the stress tensor and the translation/dilation/rotation conservation
//!   currents its critical points satisfy,
//! - a family of pointwise identities (divergence identities, an invertible
//!   tangent-wedge operator with closed-form inverse, contraction identities
//!   of the exterior algebra) that hold on *every* immersion and therefore
//!   exercise the whole differential-geometry stack,
//! - conformal-invariance experiments under Möbius transformations.
//!
//! Everything is organized around a catalog of analytic immersions (spheres,
//! perturbed spheres, ellipsoids, graphs, a minimal cone, Möbius images) with
//! chart quadrature and Richardson-extrapolated error estimates.

pub mod alg;
pub mod catalog;
// pub mod cli;
pub mod geometry;
pub mod invariants;
pub mod jets;
// pub mod noether;
// pub mod report;
pub mod scalar;

pub use jets::{Jet, JetError};
pub use scalar::Scalar;
