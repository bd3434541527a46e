use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the inference routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution or model parameter lies outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Input data violates a precondition (counts, lengths, variance, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),
    /// Every prior point has zero likelihood.
    #[error("data impossible under every prior point")]
    ImpossibleData,
    /// A column of draws has zero variance.
    #[error("degenerate chain: column `{0}` has zero variance")]
    DegenerateChain(String),
    /// An iterative routine failed to converge or produced an unusable result.
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::InvalidData(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for failures of a numerical procedure rather than of its inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::DegenerateChain(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(_) = e.kind() {
            Error::Io(e.to_string())
        } else {
            Error::InvalidData(e.to_string())
        }
    }
}
