use thiserror::Error;

/// Failures raised by the series kernel and the model pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient index {index} is beyond truncation order {order}")]
    OutOfRange { index: usize, order: usize },

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation order {have} is too small, need at least {need}")]
    InsufficientOrder { need: usize, have: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("outside disk of convergence: {0}")]
    Convergence(String),

    #[error("internal consistency fault: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
