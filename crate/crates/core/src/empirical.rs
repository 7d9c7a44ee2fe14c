//! Scalar empirical Bernstein machinery applied to trace sequences.

use crate::error::{check_probability, domain, Result};
use crate::Real;

/// Scalars `Z_1, …, Z_m` known to lie in `[0, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBatch<T> {
    values: Vec<T>,
    upper: T,
}

impl<T: Real> ScalarBatch<T> {
    /// Validates the range; values within tolerance below zero are clamped
    /// to zero (traces of PSD operators can round to `-1e-17`).
    pub fn new(mut values: Vec<T>, upper: T) -> Result<Self> {
        if !(upper > T::zero() && upper.is_finite()) {
            return domain(format!("scalar upper bound must be positive, got {upper}"));
        }
        if values.len() < 2 {
            return domain(format!("scalar batch needs at least 2 values, got {}", values.len()));
        }
        let tol = T::validation_tol() * T::one().max(upper);
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < -tol || *v > upper + tol {
                return domain(format!("value {i} = {v} outside [0, {upper}]"));
            }
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        Ok(Self { values, upper })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::count(self.len())
    }
}

/// Pair-difference variance `ς² = (1/(m(m−1))) Σ_{i<j} (Z_i − Z_j)²`.
///
/// Uses the identity `ς² = (1/(m−1)) Σ (Z_i − Z̄)²`, which is linear in `m`.
pub fn pair_variance<T: Real>(batch: &ScalarBatch<T>) -> T {
    let mean = batch.mean();
    let ss: T = batch.values.iter().map(|&z| (z - mean) * (z - mean)).sum();
    ss / T::count(batch.len() - 1)
}

/// One-sided deviation `ς √(2 log(2/δ)/m) + 7 B log(2/δ) / (3(m − 1))`
/// bounding `E Z − Z̄` (and, by symmetry, `Z̄ − E Z`) with probability `1 − δ`.
pub fn mp_margin<T: Real>(batch: &ScalarBatch<T>, delta: T) -> Result<T> {
    check_probability("delta", delta)?;
    let m = T::count(batch.len());
    let log_term = (T::lit(2.0) / delta).ln();
    let spread = pair_variance(batch).sqrt() * (T::lit(2.0) * log_term / m).sqrt();
    let range = T::lit(7.0) * batch.upper * log_term / (T::lit(3.0) * (m - T::one()));
    Ok(spread + range)
}
