use thiserror::Error;

/// Precondition failures on mechanism parameters and inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("delta must lie in (0,1), got {0}")]
    DeltaOutOfRange(f64),
    #[error("alpha must lie in [0, delta) = [0, {delta}), got {alpha}")]
    AlphaOutOfRange { alpha: f64, delta: f64 },
    #[error("sensitivity must be positive and finite, got {0}")]
    InvalidSensitivity(f64),
    #[error("cost exponent n must be >= 1, got {0}")]
    ExponentBelowOne(f64),
    #[error("cost function violates symmetry/monotonicity at x = {x}: {reason}")]
    CostProperty { x: f64, reason: &'static str },
    #[error("{0}")]
    Invalid(String),
}

impl DomainError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        DomainError::Invalid(msg.into())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// Adaptive quadrature ran out of its subdivision budget before
    /// reaching the requested tolerance.
    #[error("quadrature did not reach tolerance {tol:e} within {budget} subintervals (estimate {estimate})")]
    Quadrature { tol: f64, budget: usize, estimate: f64 },
}

impl Error {
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_delta(delta: f64) -> Result<(), DomainError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(DomainError::DeltaOutOfRange(delta))
    }
}

pub(crate) fn check_sensitivity(sensitivity: f64) -> Result<(), DomainError> {
    if sensitivity > 0.0 && sensitivity.is_finite() {
        Ok(())
    } else {
        Err(DomainError::InvalidSensitivity(sensitivity))
    }
}

pub(crate) fn check_exponent(n: f64) -> Result<(), DomainError> {
    if n >= 1.0 && n.is_finite() {
        Ok(())
    } else {
        Err(DomainError::ExponentBelowOne(n))
    }
}
