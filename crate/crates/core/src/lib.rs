#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::redundant_guards
)]

pub mod contact;
pub mod error;
pub mod forms;
pub mod hk;
pub mod jets;
pub mod metric;
pub mod models;
pub mod quat;
pub mod sampling;

pub use error::{Error, Result};
