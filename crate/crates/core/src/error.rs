use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed text input (Hamiltonian, coefficient or graph files).
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },

    #[error("{what} = {value} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid { .. } | Error::QubitMismatch { .. } | Error::SizeLimit { .. } => 2,
            Error::Syntax { .. } | Error::Io { .. } => 3,
            Error::Numeric(_) => 4,
        }
    }
}
