use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every model in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent configuration (unknown preset, bad sweep spec, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The result would exceed the representable / physical range.
    #[error("range error: {0}")]
    Range(String),

    /// A numerical procedure failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The integrator ran out of steps before reaching the requested length.
    #[error("numerical failure: step budget exhausted at z = {achieved_z} m of {target_z} m")]
    StepBudget { achieved_z: f64, target_z: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                other => Error::Serialization(format!("{other:?}")),
            }
        } else {
            Error::Serialization(e.to_string())
        }
    }
}
