use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{n} qubits exceeds the supported maximum of {max}")]
    Capacity { n: usize, max: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("solver degeneracy: {0}")]
    Degenerate(String),
}

impl TomoError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        TomoError::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        TomoError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            TomoError::Input(_) | TomoError::Capacity { .. } => 2,
            TomoError::Io { .. } => 3,
            TomoError::Degenerate(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, TomoError>;
