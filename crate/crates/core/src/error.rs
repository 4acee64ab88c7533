use thiserror::Error;

use crate::numerics::NumericsError;
use crate::omega::OmegaError;
use crate::piii::PiiiError;
use crate::pvi::PviError;
use crate::series::SeriesError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-wide error; each module keeps its own enum.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error(transparent)]
    Pvi(#[from] PviError),
    #[error(transparent)]
    Piii(#[from] PiiiError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerical pipeline (exit code 2) as opposed
    /// to configuration or I/O problems.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numerics(_) | Error::Omega(_) | Error::Pvi(_) | Error::Piii(_) | Error::Series(_)
        )
    }
}
