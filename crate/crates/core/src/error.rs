use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value encountered in {what} at index {index}")]
    NonFinite { what: &'static str, index: i64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("eigenpair {index} has relative residual {residual:e} above {tolerance:e}")]
    Residual {
        index: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("shifted operator is singular at shift {shift}")]
    SingularShift { shift: f64 },

    #[error("only {survived} real eigenvalues survived the reality filter, {requested} requested")]
    TooFewReal { requested: usize, survived: usize },

    #[error("norm of state is zero or non-finite ({norm})")]
    BadNorm { norm: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
