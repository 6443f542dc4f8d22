use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis 0 is the computational basis and has no rotation circuit")]
    IdentityBasis,

    #[error("polynomial {0:#x} is not irreducible over GF(2)")]
    Reducible(u64),

    #[error("self-dual basis search failed for degree {0}")]
    NoSelfDualBasis(usize),

    #[error("outcome probabilities sum to {0}, basis is not orthonormal")]
    BrokenBasis(f64),

    #[error("invalid estimator configuration: {0}")]
    Config(String),

    #[error("empty shadow set")]
    EmptyShadow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
