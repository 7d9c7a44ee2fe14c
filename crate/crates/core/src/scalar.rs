//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the bounds are evaluated in.
///
/// Implemented for `f32` and `f64`. The validation tolerance is per type
/// since single precision cannot honour the `1e-9` relative slack used for
/// double precision inputs.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative slack used when validating certified bounds (`‖X‖ ≤ c`, ...).
    const VALIDATION_TOL: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn validation_tol() -> Self {
        Self::lit(Self::VALIDATION_TOL)
    }
}

impl Real for f32 {
    const VALIDATION_TOL: f64 = 1e-4;
}

impl Real for f64 {
    const VALIDATION_TOL: f64 = 1e-9;
}
