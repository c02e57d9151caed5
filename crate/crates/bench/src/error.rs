use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes of the `subsel` binary.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVALID_INPUT: i32 = 2;
    pub const TIMED_OUT: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] subsel_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Io { .. } => exit::IO,
            _ => exit::INVALID_INPUT,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
