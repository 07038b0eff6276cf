//! Quaternion algebra and ℍ-valued differential forms.

mod algebra;
mod qform;

pub use algebra::{Quaternion, UNIT_TOL};
pub use qform::{nu_family_qform, QuaternionField, QuaternionForm, QuaternionOneForm};
