use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lower bound undefined: m = {m} < 2^z = {}", 1u64 << z)]
    BoundUndefined { m: usize, z: u32 },

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("{what} of size {size} exceeds the exact-search limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error(
        "m = {m} < 2^z = {}: the adversary is unable to produce any batches (requires m >= 2^z)",
        1u64 << z
    )]
    AdversaryImpossible { m: usize, z: u32 },

    #[error("element {0} is uncoverable (empty membership)")]
    Infeasible(String),

    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("empty result: nothing to emit")]
    EmptyResult,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
