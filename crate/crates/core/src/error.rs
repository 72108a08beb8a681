use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("input is empty: {0}")]
    EmptyInput(String),

    #[error("no rows left after dropping missing values")]
    EmptyDataset,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("training diverged at epoch {epoch} (loss is not finite)")]
    Divergence { epoch: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 2 for input problems, 3 for contract violations, 4 for configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Schema(_)
            | Error::EmptyInput(_)
            | Error::EmptyDataset
            | Error::Json(_) => 2,
            Error::Contract(_) | Error::DegenerateLabels(_) | Error::Divergence { .. } => 3,
            Error::Config(_) => 4,
        }
    }
}
