//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("probability entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("probability entry {index} exceeds 1 ({value})")]
    EntryAboveOne { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular: {0}")]
    Singular(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("matrix is not Hermitian: max |M - M^dag| = {0:.3e}")]
    NotHermitian(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by exceeding an explicit size/resource cap,
    /// as opposed to invalid numeric input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
