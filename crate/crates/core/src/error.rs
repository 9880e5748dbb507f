use thiserror::Error;

/// Errors raised by the link model, the analysis and the Monte Carlo oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("radiation pattern is not positive ({value}) for element {element}")]
    SingularPattern { element: usize, value: f64 },

    #[error("outdated-CSI correlation J0({argument}) = {value} is negative")]
    NegativeCorrelation { argument: f64, value: f64 },

    #[error("envelope variance {variance:e} is too small relative to mean {mean:e} for a Gamma fit")]
    DegenerateDistribution { mean: f64, variance: f64 },

    #[error("quadrature did not reach {tolerance:e} (estimated error {estimate:e}) within {intervals} intervals")]
    QuadratureFailure {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that come from numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailure { .. } | Error::DegenerateDistribution { .. }
        )
    }
}
