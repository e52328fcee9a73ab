use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] casqmc_core::Error),
    #[error("method {method} does not apply to the {problem} problem")]
    Incompatible { method: String, problem: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("malformed report: {0}")]
    Parse(String),
}

impl HarnessError {
    /// True for errors caused by the request rather than the run.
    pub fn is_usage(&self) -> bool {
        matches!(self, HarnessError::Incompatible { .. } | HarnessError::Usage(_))
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
