use std::path::PathBuf;

use bestarm_core::{AlgoError, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid instance: {0}")]
    Instance(#[from] ModelError),
    #[error(transparent)]
    Algorithm(#[from] AlgoError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl HarnessError {
    /// Process exit code: 2 for bad input, 1 for I/O trouble on output.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Write { .. } => 1,
            _ => 2,
        }
    }
}
