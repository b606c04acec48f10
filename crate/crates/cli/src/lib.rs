//! File formats, experiment plumbing and the `ome` command line on top of
//! `ome-core`.

pub mod config;
pub mod format;
pub mod run;

/// Errors of the command line, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] format::FormatError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("alarm: {0}")]
    Alarm(String),
}

impl From<ome_core::Error> for CliError {
    fn from(e: ome_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(config::ConfigError::WeightsFile { .. }) => 3,
            CliError::Usage(_) | CliError::Format(_) | CliError::Config(_) => 1,
            CliError::Alarm(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}
