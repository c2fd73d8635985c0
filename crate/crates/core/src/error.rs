use thiserror::Error;

/// Errors produced by the graphcut library.
#[derive(Debug, Error)]
pub enum Error {
    /// An exact routine was asked to work beyond its tractable size.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numeric or structural parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed input data (bad labels, bad edges, bad files).
    #[error("invalid input: {0}")]
    Input(String),

    /// Two objects that must share a block structure do not.
    #[error("structure mismatch: {0}")]
    Structural(String),

    /// A mass, size or boundary constraint cannot be satisfied.
    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
