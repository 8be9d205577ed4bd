use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The three variants map onto the CLI exit codes: configuration problems
/// exit with 2, domain and numeric failures with 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs outside the domain of the formula (superluminal speeds,
    /// timelike pairs where a spacelike one is needed, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or invalid configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// An iterative or integrating routine failed.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
