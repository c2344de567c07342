use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the samplers, oracles and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The counting formula needs a double factorial below (-1)!!.
    #[error("convention hole at (n = {n}, p = {p}): the closed form needs ({arg})!!, take the value from the series oracle")]
    ConventionHole { n: u64, p: u64, arg: i64 },

    #[error("perimeter {perimeter} exceeds table capacity {capacity}")]
    Capacity { perimeter: usize, capacity: usize },

    #[error("rejection budget of {attempts} attempts exhausted: {hint}")]
    RejectionBudget { attempts: usize, hint: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
