use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integral of the connection profile does not converge: {0}")]
    DivergentIntegral(String),

    #[error("survivor-count bounds are vacuous: additive slack 1/(2 n delta_n) = {slack} >= 1")]
    VacuousBounds { slack: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid plan key `{key}`: {message}")]
    Plan { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn plan(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Plan {
            key: key.into(),
            message: message.into(),
        }
    }
}
