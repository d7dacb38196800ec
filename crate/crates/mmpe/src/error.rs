use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MmpeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension {n} exceeds the numeric estimator cap of {cap}; use bounds or Monte Carlo with a closed-form estimator")]
    DimensionCap { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MmpeError>;
