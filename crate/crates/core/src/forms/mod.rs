//! Exterior calculus on coordinate charts.

mod chart;
mod form;
pub mod index;
mod value;

pub use chart::{ChartMap, VectorField};
pub use form::{sum_forms, DifferentialForm};
pub use value::FormValue;
