use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("numeric domain error: {0}")]
    Domain(String),

    #[error("admissibility violated: {0}")]
    Admissibility(String),

    #[error("point outside region {expected}: classified as {actual}")]
    Region { expected: String, actual: String },

    #[error("Picard iteration failed to contract (ratios {ratios:?})")]
    ContractionFailure { ratios: Vec<f64> },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
