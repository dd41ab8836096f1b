use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of a geometric or physical formula.
    #[error("{quantity} = {value} is out of domain: {reason}")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid Walker parameters: {0}")]
    InvalidWalker(String),

    /// A link whose required transmission power is unbounded (attenuation clamped to 0).
    #[error("link is infeasible: atmospheric attenuation underflows")]
    InfeasibleLink,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("fading parameters unavailable: {0}")]
    Fading(String),

    #[error("scenario parse error: {0}")]
    Parse(String),

    /// A scenario parsed but violates an invariant.
    #[error("scenario validation failed: {0}")]
    Validation(String),

    #[error("no crossing between the latency and power curves")]
    NoCrossing,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            reason,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
