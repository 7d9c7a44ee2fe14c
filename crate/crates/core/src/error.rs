use thiserror::Error;

/// Failures raised by the bound computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine did not converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Tail evaluated with a zero variance proxy.
    #[error("degenerate variance: sigma_u^2 must be positive")]
    DegenerateVariance,
    /// Operands of incompatible dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, BoundError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(BoundError::Domain(msg.into()))
}

pub(crate) fn check_probability<T: crate::Real>(name: &str, delta: T) -> Result<()> {
    if delta > T::zero() && delta < T::one() {
        Ok(())
    } else {
        domain(format!("{name} = {delta} must lie in (0, 1)"))
    }
}
