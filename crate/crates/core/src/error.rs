use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation, estimation and reporting layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {value:e}, error estimate {error_estimate:e} after {intervals} subintervals")]
    Quadrature {
        value: f64,
        error_estimate: f64,
        intervals: usize,
    },

    /// The time grid does not have the structure an estimator requires.
    #[error("grid mismatch: {0}")]
    Grid(String),

    /// A configuration document could not be parsed or failed validation.
    #[error("config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialize(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

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
