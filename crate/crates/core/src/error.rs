//! Crate-wide error type.
//!
//! Variants separate the four failure families the pipeline distinguishes:
//! malformed input text ([`Error::Parse`]), inputs that violate a documented
//! precondition or invariant ([`Error::Validation`] / [`Error::Domain`]), and
//! numerical failures inside an otherwise valid computation
//! ([`Error::Computation`]).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based within the source document.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structurally valid input that violates a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed (non-convergence, rank deficiency, ...).
    #[error("computation error: {0}")]
    Computation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn computation(message: impl Into<String>) -> Self {
        Error::Computation(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
