use std::io;
use std::path::{Path, PathBuf};

use qscd_core::Error as CoreError;

/// Failure of a CLI command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Data(_) | RunError::Io { .. } => 3,
            RunError::Numeric(_) => 4,
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
        move |source| RunError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Any core error raised while reading or checking a dataset.
    pub fn data(e: CoreError) -> RunError {
        RunError::Data(e.to_string())
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::FullyRejected { .. } | CoreError::NonFiniteLoss { .. } => RunError::Numeric(e.to_string()),
            CoreError::InvalidParams(_) | CoreError::OddModesForCross(_) => RunError::Config(e.to_string()),
            _ => RunError::Data(e.to_string()),
        }
    }
}

pub type Result<T, E = RunError> = std::result::Result<T, E>;
