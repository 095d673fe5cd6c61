use thiserror::Error;

pub type Result<T, E = AdrcError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdrcError {
    /// A parameter is outside the domain of the requested operation.
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    /// Placed poles deviate from the requested location by more than the
    /// placement tolerance.
    #[error("pole placement residual {residual:e} exceeds tolerance {tolerance:e}")]
    Placement { residual: f64, tolerance: f64 },

    /// The closed-form coefficient tables only exist for first- and
    /// second-order ADRC.
    #[error("closed-form coefficients are only available for order 1 and 2 (got {0}); use the oracle")]
    UnsupportedOrder(usize),

    /// The feedback controller denominator lacks the integrator pole at z = 1.
    #[error("feedback denominator has no root at z = 1 (residual {residual:e})")]
    MissingIntegrator { residual: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Violation of the two-phase step/commit contract.
    #[error("usage error: {0}")]
    Usage(&'static str),

    /// The simulated output left the divergence guard.
    #[error("simulation diverged at sample {sample} (|y| = {value:e})")]
    Diverged { sample: usize, value: f64 },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl AdrcError {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        AdrcError::Domain {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for AdrcError {
    fn from(err: std::io::Error) -> Self {
        AdrcError::Io(err.to_string())
    }
}
