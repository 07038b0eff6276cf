//! Truncated Taylor jets and the scalar fields evaluated through them.

mod field;
mod jet;
pub mod quadrature;
mod wirtinger;

pub use field::{eval_jet, Evaluator, Point, ScalarField};
pub use jet::{Jet, INTERNAL_MAX_ORDER, MAX_DIM, MAX_ORDER};
pub use wirtinger::{complex_hessian, wirtinger, Pairing, Wirtinger};
