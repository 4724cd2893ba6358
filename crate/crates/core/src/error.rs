use thiserror::Error;

/// Errors raised by the model operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the formula.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// Two mass distributions overlap or two point masses coincide.
    #[error("overlapping mass distributions: {0}")]
    Overlap(&'static str),
    /// The requested pairing of mass-distribution kinds has no rule.
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(&'static str),
    /// A stochastic estimate did not reach its target precision.
    #[error("precision not reached: estimate {estimate:e} with 99% half-width {half_width:e} from {samples} samples")]
    Precision {
        estimate: f64,
        half_width: f64,
        samples: usize,
    },
    /// The covariance flow left the set of physical states.
    #[error("integration failure at t = {time:e}: {reason}")]
    Integration { time: f64, reason: &'static str },
    /// A point-point energy with zero separation.
    #[error("divergent gravitational energy: {0}")]
    Divergence(&'static str),
    /// Inconsistent parameters in a domain object.
    #[error("invalid {field}: {reason}")]
    Invalid {
        field: &'static str,
        reason: &'static str,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
