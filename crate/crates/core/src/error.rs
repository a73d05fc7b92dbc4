use thiserror::Error;

/// Errors raised by the numerical routines and the experiment harness.
///
/// The variants are grouped by the CLI exit code they map to (see
/// [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} (limit {limit}, requested {requested})")]
    Capacity {
        what: &'static str,
        limit: f64,
        requested: f64,
    },

    #[error("numeric range error: {0}")]
    NumericRange(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} (target {target:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        target: f64,
    },

    #[error("iteration cap of {0} reached")]
    Degenerate(usize),

    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 usage, 2 config, 3 capacity, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 1,
            Error::Config(_) | Error::Json(_) | Error::Io(_) | Error::Csv(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Domain(_)
            | Error::NumericRange(_)
            | Error::Quadrature { .. }
            | Error::Degenerate(_)
            | Error::Resolution(_)
            | Error::Range(_)
            | Error::Insufficient(_) => 4,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
