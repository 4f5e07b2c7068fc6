use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: not a finite number: {content:?}")]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("{0}: no values")]
    EmptyInput(PathBuf),

    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Estimator(#[from] maxent_quantile::Error),
}

impl BenchError {
    /// Short category printed with the message; also selects the exit code.
    pub fn category(&self) -> &'static str {
        match self {
            BenchError::Config(_) => "config",
            BenchError::Read { .. } | BenchError::Parse { .. } | BenchError::EmptyInput(_) => {
                "input"
            }
            BenchError::Write { .. } => "output",
            BenchError::Estimator(maxent_quantile::Error::Config(_)) => "config",
            BenchError::Estimator(_) => "estimator",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 2,
            "input" => 3,
            "output" => 4,
            _ => 5,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
