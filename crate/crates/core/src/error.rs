use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested evaluation lies outside the regime where the formula
    /// is meaningful (asymptotic guard, nonpositive centering, ...).
    #[error("regime error: {0}")]
    Regime(String),

    #[error("numerical error: {message}")]
    Numerical {
        message: String,
        /// Best error bound reached before giving up, if any.
        achieved_bound: Option<f64>,
        /// Seed of the offending Monte Carlo trial, if any.
        seed: Option<(u64, u64)>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, achieved_bound: Option<f64>) -> Self {
        Error::Numerical {
            message: msg.into(),
            achieved_bound,
            seed: None,
        }
    }
}
