use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {n} is not supported: {reason}")]
    Modulus { n: u64, reason: &'static str },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coordinate {value} out of range for modulus {n}")]
    CoordinateRange { value: u64, n: u64 },

    #[error("duplicate point at index {index}")]
    DuplicatePoint { index: usize },

    #[error("{what} = {got} exceeds the supported bound {limit}")]
    SizeBound {
        what: &'static str,
        got: u128,
        limit: u128,
    },

    #[error("{what} needs {needed} units of budget, only {budget} given")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point file, line {line}: {msg}")]
    PointFile { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
