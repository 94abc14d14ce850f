use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration values.
    #[error("configuration error: {0}")]
    Config(String),

    /// A required configuration key is absent.
    #[error("missing configuration key `{0}`")]
    MissingKey(String),

    /// A configuration or data file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    /// A point was evaluated outside the closed problem domain.
    #[error("point ({0}, {1}) lies outside the domain")]
    Domain(f64, f64),

    /// Malformed computational graph (non-topological order, unregistered leaf, shape mismatch).
    #[error("graph structure error: {0}")]
    Structural(String),

    /// A linear or nonlinear solver failed.
    #[error("solver error: {0}")]
    Solver(String),

    /// Measurement layout is inconsistent with the domain.
    #[error("measurement layout error: {0}")]
    Layout(String),

    /// Training produced a non-finite gradient or loss.
    #[error("non-finite value during training at epoch {epoch}, update {update}: {detail}")]
    NonFinite {
        epoch: usize,
        update: usize,
        detail: String,
    },

    /// Training loss exceeded the divergence threshold.
    #[error("training diverged at epoch {epoch}: loss {loss:e}")]
    Diverged { epoch: usize, loss: f64 },

    /// Raster or array dimensions disagree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::MissingKey(_) | Error::Parse { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
