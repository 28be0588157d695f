use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("algorithm `{0}` is provided by the convex-baselines component, which is not part of this build")]
    Unavailable(&'static str),

    #[error(transparent)]
    Solver(#[from] trtc_core::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
