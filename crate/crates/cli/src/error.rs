use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}: malformed instance at line {line}, column {column}: {message}")]
    Syntax {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{file}: invalid instance at {field}: {message}")]
    Invalid {
        file: String,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] gramdist::Error),
}

impl HarnessError {
    /// Process exit status for this error: 3 for unmet numerical
    /// preconditions, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(e) if e.is_precondition() => 3,
            _ => 2,
        }
    }
}
