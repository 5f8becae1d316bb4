use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;
use crate::generation::news::FixtureError;
use crate::lexicon::LexiconError;
use crate::model::ModelError;
use crate::network::GraphError;
use crate::timeline::TimelineError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Timeline(#[from] TimelineError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    News(#[from] FixtureError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for usage/configuration problems, 2 for failures
    /// while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Runtime(_) => 2,
            _ => 1,
        }
    }
}
