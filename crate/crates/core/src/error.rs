use thiserror::Error;

use crate::norm::ValidationReport;

/// Errors raised by the toolkit.
///
/// The variants line up with how callers react: malformed input is a
/// parse problem, a validation failure carries the full report, and a
/// contract error means a precondition of the requested operation is not met.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid norm: {0}")]
    Validation(ValidationReport),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("unsupported representation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
