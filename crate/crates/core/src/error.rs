use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An elementary function was evaluated outside its natural domain.
    #[error("domain error in {op}: argument {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("requested jet order {requested} exceeds the maximum of {max}")]
    Order { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("point has non-finite coordinate {0}")]
    NonFinite(f64),

    #[error("degenerate volume form at {point:?} (|vol| = {volume:e})")]
    DegenerateVolume { point: Vec<f64>, volume: f64 },

    #[error("ill-conditioned coframe at {point:?} (condition number {condition:e})")]
    IllConditioned { point: Vec<f64>, condition: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("not a contact form at {point:?}")]
    NonContact { point: Vec<f64> },

    #[error("structure function is not positive at {point:?} (value {value})")]
    NonPositive { point: Vec<f64>, value: f64 },

    #[error("contact sphere is not {expected}-normalised at {point:?} (Λ = {found})")]
    NotNormalised {
        point: Vec<f64>,
        expected: f64,
        found: f64,
    },

    #[error("triple is not naturally ordered: {0}")]
    Orientation(String),

    #[error("symplectic triple is degenerate: {0}")]
    DegenerateTriple(String),

    #[error("vector field is tangent to the transversal at {point:?}")]
    NotTransverse { point: Vec<f64> },

    #[error("identity check failed: {what} residual {residual:e} exceeds {tolerance:e}")]
    Residual {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("expected a unit, found norm {0}")]
    NonUnit(f64),

    #[error("point {point:?} lies outside the domain {domain}")]
    OutsideDomain {
        point: Vec<f64>,
        domain: &'static str,
    },

    #[error("{0}")]
    Degenerate(String),

    #[error("modulus {re} + {im}i lies outside the strip |Re δ| < 1/2")]
    Strip { re: f64, im: f64 },

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
}
