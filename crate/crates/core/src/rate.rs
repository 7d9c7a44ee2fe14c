//! Scalar analytic kernel of the bounds: the Bennett rate function, the
//! bounded-increment MGF bound, the trace-Bernstein margin, and the operator
//! Bennett tail together with its inversions.

use crate::error::{check_probability, domain, BoundError, Result};
use crate::Real;

/// Doublings allowed when growing the inversion bracket.
const MAX_BRACKET_DOUBLINGS: usize = 1000;
const MAX_BISECTION_STEPS: usize = 4000;

/// Bennett rate `h(u) = (1 + u) log(1 + u) − u`.
pub fn bennett_h<T: Real>(u: T) -> Result<T> {
    if !(u >= T::zero()) {
        return domain(format!("bennett_h requires u >= 0, got {u}"));
    }
    // ln_1p keeps h accurate for tiny u, where h(u) ≈ u²/2
    Ok((T::one() + u) * u.ln_1p() - u)
}

/// Closed-form upper bound `√(2y) + y/3` on `h⁻¹(y)`.
pub fn h_inv_upper<T: Real>(y: T) -> Result<T> {
    if !(y >= T::zero()) {
        return domain(format!("h_inv_upper requires y >= 0, got {y}"));
    }
    Ok((T::lit(2.0) * y).sqrt() + y / T::lit(3.0))
}

/// `ψ(θ) = (e^{θc} − θc − 1)/c²`, the MGF bound for increments bounded by `c`.
pub fn psi_pc<T: Real>(theta: T, c: T) -> Result<T> {
    if !(theta >= T::zero()) || !(c > T::zero()) {
        return domain(format!("psi_pc requires theta >= 0 and c > 0 (theta = {theta}, c = {c})"));
    }
    let x = theta * c;
    let value = x.exp_m1() - x;
    if !value.is_finite() {
        return Err(BoundError::Numeric(format!("exp overflow in psi_pc at theta*c = {x}")));
    }
    Ok(value / (c * c))
}

/// Trace-Bernstein margin
/// `Γ = √(2τ log(2/δ) / half_n) + 2c² log(2/δ) / (3 half_n)`.
///
/// `c` is the bound on the original observations; the first-order auxiliary
/// operators are bounded by `2c²`, which is the constant used here.
pub fn gamma_margin<T: Real>(tau: T, c: T, delta: T, half_n: usize) -> Result<T> {
    check_probability("delta", delta)?;
    if !(tau >= T::zero()) {
        return domain(format!("gamma_margin requires tau >= 0, got {tau}"));
    }
    if half_n == 0 {
        return domain("gamma_margin requires half_n >= 1");
    }
    let m = T::count(half_n);
    let log_term = (T::lit(2.0) / delta).ln();
    let two = T::lit(2.0);
    Ok((two * tau * log_term / m).sqrt() + two * c * c * log_term / (T::lit(3.0) * m))
}

/// Bernstein relaxation of the Bennett inversion: `√(2σ² z) + r z / 3`.
///
/// If `P(Z ≥ ε) ≤ exp(−(σ²/r²) h(rε/σ²))` then `Z` is below this value with
/// probability at least `1 − e^{−z}`.
pub fn bernstein_inverse<T: Real>(sigma_sq: T, r: T, log_inv_delta: T) -> T {
    (T::lit(2.0) * sigma_sq * log_inv_delta).sqrt() + r * log_inv_delta / T::lit(3.0)
}

/// Arguments of the operator Bennett tail with variance proxies plugged in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams<T> {
    /// Sample count entering the bound.
    pub n: usize,
    /// Almost-sure bound on the centered summands (`c` or `2c`).
    pub c_eff: T,
    /// Upper proxy for `‖Σ‖`.
    pub sigma_u_sq: T,
    /// Upper proxy for `tr(Σ)`.
    pub tau_u: T,
}

impl<T: Real> TailParams<T> {
    pub fn new(n: usize, c_eff: T, sigma_u_sq: T, tau_u: T) -> Result<Self> {
        if n == 0 {
            return domain("TailParams requires n >= 1");
        }
        for (name, v) in [("c_eff", c_eff), ("sigma_u_sq", sigma_u_sq), ("tau_u", tau_u)] {
            if !v.is_finite() || v < T::zero() {
                return domain(format!("{name} = {v} must be finite and nonnegative"));
            }
        }
        if c_eff == T::zero() {
            return domain("c_eff must be positive");
        }
        Ok(Self {
            n,
            c_eff,
            sigma_u_sq,
            tau_u,
        })
    }

    /// Intrinsic-dimension factor `max(τ_u/σ_u², 1)`.
    pub fn dimension_factor(&self) -> T {
        (self.tau_u / self.sigma_u_sq).max(T::one())
    }

    /// `2 max(τ_u/σ_u², 1)`, the tail value at `r = 0`.
    pub fn prefactor(&self) -> T {
        T::lit(2.0) * self.dimension_factor()
    }

    fn exponent(&self, r: T) -> Result<T> {
        let nv = T::count(self.n) * self.sigma_u_sq;
        let c = self.c_eff;
        Ok(nv / (c * c) * bennett_h(c * r / nv)?)
    }
}

/// `Π(r) = 2 max(τ_u/σ_u², 1) exp(−(nσ_u²/c²) h(c r/(nσ_u²)))`.
pub fn pi_tail<T: Real>(params: &TailParams<T>, r: T) -> Result<T> {
    if !(params.sigma_u_sq > T::zero()) {
        return Err(BoundError::DegenerateVariance);
    }
    Ok(params.prefactor() * (-params.exponent(r)?).exp())
}

/// Smallest `r ≥ 0` with `Π(r) ≤ δ₁`, by bracketed bisection.
///
/// Returns `0` when the tail at the origin is already below `δ₁`.
pub fn pi_inverse<T: Real>(params: &TailParams<T>, delta1: T) -> Result<T> {
    if !(delta1 > T::zero()) {
        return domain(format!("pi_inverse requires delta1 > 0, got {delta1}"));
    }
    if !(params.sigma_u_sq > T::zero()) {
        return Err(BoundError::DegenerateVariance);
    }
    let prefactor = params.prefactor();
    if delta1 >= prefactor {
        return Ok(T::zero());
    }
    // Bernstein closed form: an upper bound on the root in exact arithmetic
    let log_ratio = (prefactor / delta1).ln();
    let nv = T::count(params.n) * params.sigma_u_sq;
    let mut hi = bernstein_inverse(nv, params.c_eff, log_ratio).max(T::min_positive_value());
    let mut doublings = 0;
    while pi_tail(params, hi)? > delta1 {
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS || !hi.is_finite() {
            return Err(BoundError::Numeric("pi_inverse bracket expansion failed".into()));
        }
        hi = hi * T::lit(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if pi_tail(params, mid)? > delta1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Closed-form Bernstein radius for the same tail: the `r` solving
/// `Π(r) ≤ δ₁` after relaxing `h⁻¹` by `√(2y) + y/3`.
pub fn pi_bernstein_radius<T: Real>(params: &TailParams<T>, delta1: T) -> Result<T> {
    if !(delta1 > T::zero()) {
        return domain(format!("delta1 must be positive, got {delta1}"));
    }
    let log_ratio = (params.prefactor() / delta1).ln().max(T::zero());
    let nv = T::count(params.n) * params.sigma_u_sq;
    Ok(bernstein_inverse(nv, params.c_eff, log_ratio))
}
