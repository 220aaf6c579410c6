//! Exact exterior-algebra arithmetic: multivectors over 5-space, chart forms
//! over a 4-dimensional parameter domain, and the index symbols gluing them.

pub mod chart_form;
pub mod epsilon;
pub mod multivector;

pub use chart_form::{ChartForm, ChartMetric, ValueProduct, FORM_SIZES};
pub use multivector::{AlgebraError, Multivector5, GRADE_SIZES};
