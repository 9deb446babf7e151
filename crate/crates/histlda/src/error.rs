use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the mathematical domain of an operation,
    /// e.g. a point at or beyond the upper end of a half-open range.
    #[error("domain error: {0}")]
    Domain(String),
    /// Structurally invalid input: bad sizes, indices, or empty data.
    #[error("argument error: {0}")]
    Argument(String),
    /// A computation produced a non-finite intermediate value.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
