use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented invariant (normalization, Hermiticity, unitarity, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A scalar parameter lies outside its physical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Shapes or tensor factorizations are incompatible.
    #[error("structural error: {0}")]
    Structural(String),

    /// A numerical routine failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
