use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (nome outside the unit disc, point on a branch cut, divergent series,
    /// annulus constraint violated, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or iteration failed to converge within its budget.
    #[error("precision error: {0}")]
    Precision(String),

    /// Malformed configuration, literal, or otherwise invalid argument.
    #[error("config error: {0}")]
    Config(String),

    /// A combinatorial enumeration exceeded its work budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// The operation is not provided for these parameters (by design).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
