use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by construction, composition and search routines.
///
/// Verification failures are not errors: the verifier reports them as
/// [`crate::verify::Violation`] data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),

    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: u32, count: usize },

    #[error("certificate does not match the requested instance: {0}")]
    SpecMismatch(String),

    #[error("certificate rejected by the verifier: {0}")]
    Rejected(String),

    #[error("internal construction invariant failed: {0}")]
    Construction(String),

    #[error("exhaustive search is limited to {cap} vertices (requested {n})")]
    ExhaustiveTooLarge { n: usize, cap: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A certificate-file syntax error, positioned at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}
