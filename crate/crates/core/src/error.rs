use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("complex exceeds the face cap of {cap} faces")]
    SizeCapExceeded { cap: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not symmetric within tolerance {tol:e}")]
    Asymmetric { tol: f64 },

    #[error("eigen decomposition residual {residual:e} exceeds bound {bound:e}")]
    EigenResidual { residual: f64, bound: f64 },

    #[error("function is not injective on the unit ball of face {face}")]
    LocalInjectivityViolation { face: usize },

    #[error("face index {index} out of range for {len} faces")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
