use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwitError>;

#[derive(Debug, Error)]
pub enum QwitError {
    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {max_asymmetry:e} exceeds {tol:e}")]
    NonHermitian { max_asymmetry: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no witness exists: the state is maximally mixed")]
    NoWitnessExists,

    #[error("dimension {dim} exceeds the cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("insufficient truncation: tail mass {tail:e} exceeds budget {budget:e} at D = {dim}; increase the cutoff")]
    InsufficientTruncation { tail: f64, budget: f64, dim: usize },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QwitError {
    /// True for failures caused by reading or decoding input files.
    pub fn is_io(&self) -> bool {
        matches!(self, QwitError::Io(_) | QwitError::Json(_))
    }
}
