use thiserror::Error;

/// Failures raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid size: {0}")]
    Sizing(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("under-resolved: {0}")]
    UnderResolved(String),

    #[error("numerical instability: {0}")]
    Stability(String),

    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("normalization check failed: {0}")]
    Normalization(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the computation itself rather than of its inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Stability(_)
                | Error::NonConvergence { .. }
                | Error::Normalization(_)
                | Error::Degenerate(_)
        )
    }
}
