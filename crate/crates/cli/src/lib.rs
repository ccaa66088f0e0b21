//! Stage orchestration behind the `mtbias` binary.

pub mod config;
pub mod manifest;
pub mod pipeline;

/// Error with the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or configuration.
    #[error("{0}")]
    Usage(String),
    /// Missing, malformed or inconsistent input data.
    #[error("{0}")]
    Data(String),
    /// A translation backend failed.
    #[error("{0}")]
    Backend(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Backend(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn in_stage(self, stage: &str) -> CliError {
        let wrap = |m: String| format!("stage {stage} failed: {m}");
        match self {
            CliError::Usage(m) => CliError::Usage(wrap(m)),
            CliError::Data(m) => CliError::Data(wrap(m)),
            CliError::Backend(m) => CliError::Backend(wrap(m)),
            CliError::Internal(m) => CliError::Internal(wrap(m)),
        }
    }
}

pub(crate) fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub(crate) fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}
