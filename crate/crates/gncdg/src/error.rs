use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, AppError>;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("unknown scenario `{0}` (see `gncdg scenarios`)")]
    UnknownScenario(String),
    #[error("numerical failure at step {step}, t = {t}: {source}")]
    Numerical { step: usize, t: f64, source: gncdg_core::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl AppError {
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        AppError::Invalid { field, message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// Process exit code: 2 configuration, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Parse { .. } | AppError::Invalid { .. } | AppError::UnknownScenario(_) => 2,
            AppError::Numerical { .. } => 3,
            AppError::Io { .. } | AppError::Csv { .. } => 4,
        }
    }
}
