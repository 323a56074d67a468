use std::io;

use thiserror::Error;

use crate::mesh::Key;

/// Every failure the library and the `octobench` binary can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("invalid state in leaf {key} at cell ({}, {}, {}): {what}", cell[0], cell[1], cell[2])]
    State { key: Key, cell: [usize; 3], what: String },

    #[error("step {step}: {source}")]
    AtStep {
        step: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("sweep point with {cores} cores: {source}")]
    SweepPoint {
        cores: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("task failed: {0}")]
    Task(String),

    #[error("worker pool is shut down")]
    Lifecycle,

    #[error("communication error: {0}")]
    Comm(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for the CLI: 1 config, 2 runtime/state, 3 communication.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 1,
            Error::Comm(_) | Error::Protocol(_) => 3,
            Error::AtStep { source, .. } | Error::SweepPoint { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn at_step(self, step: u64) -> Self {
        match self {
            e @ Error::AtStep { .. } => e,
            e => Error::AtStep { step, source: Box::new(e) },
        }
    }
}

impl From<lanepack::SimdError> for Error {
    fn from(e: lanepack::SimdError) -> Self {
        Error::Config(e.to_string())
    }
}
