use thiserror::Error;

use crate::graph::EdgeTriple;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid format: {0}")]
    Format(String),

    /// A weight or value outside the domain an algorithm accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    Range(String),

    /// A delta batch that does not apply cleanly to the snapshot before it.
    #[error("delta batch {batch}: {reason} {triple}")]
    Consistency {
        batch: usize,
        reason: &'static str,
        triple: EdgeTriple,
    },

    #[error("{requested} snapshots exceed mask capacity of {capacity}")]
    Capacity { requested: usize, capacity: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
