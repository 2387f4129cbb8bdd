use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),

    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error(transparent)]
    Core(#[from] cavity_qst::Error),

    #[error("norm drifted by {drift:e} (limit {limit:e})")]
    NormBlowup { drift: f64, limit: f64 },

    #[error("unknown figure id `{id}`; valid ids: {valid}")]
    UnknownFigure { id: String, valid: String },

    #[error("sweep point {parameter} = {value} failed: {source}")]
    SweepPoint {
        parameter: String,
        value: f64,
        #[source]
        source: Box<CliError>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Invalid { field: field.into(), reason: reason.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 0 success, 1 validation error, 2 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(cavity_qst::Error::Numerical { .. }) | CliError::NormBlowup { .. } => 2,
            CliError::SweepPoint { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
