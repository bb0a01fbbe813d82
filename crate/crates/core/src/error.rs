use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid mismatch between states")]
    GridMismatch,

    #[error("oracle accuracy: population drift {drift:.3e} exceeds 1e-6; use a smaller step")]
    OracleAccuracy { drift: f64 },

    #[error("tabulated amplitudes {path}:{line}: {msg}")]
    Tabulated { path: String, line: usize, msg: String },

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("validity rule violated: {0}")]
    Validity(String),

    #[error("numeric check failed: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
