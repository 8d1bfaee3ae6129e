use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("grid point {index} ({point}): {source}")]
    Point {
        index: usize,
        point: String,
        #[source]
        source: sgphonon::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn is_numeric(e: &sgphonon::Error) -> bool {
    matches!(
        e,
        sgphonon::Error::NonConvergent { .. } | sgphonon::Error::NonFiniteDrive { .. }
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Point { source, .. } => {
                if is_numeric(source) {
                    3
                } else {
                    2
                }
            }
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<sgphonon::Error> for CliError {
    fn from(e: sgphonon::Error) -> Self {
        if is_numeric(&e) {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
