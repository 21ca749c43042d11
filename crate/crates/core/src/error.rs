use thiserror::Error;

/// Errors raised by the library. Every public fallible operation returns [`Result`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("magnetic index two_m={two_m} is not valid for two_j={two_j}")]
    InvalidMagneticIndex { two_j: u32, two_m: i32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("case {case} does not apply to two_j={two_j}")]
    InapplicableCase { case: u8, two_j: u32 },

    #[error("stationary point is infeasible: {0}")]
    Infeasible(String),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
