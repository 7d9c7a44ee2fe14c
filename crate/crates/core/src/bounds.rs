//! Confidence radii and intervals.
//!
//! Radii are reported for the mean deviation `‖S_n/n − μ‖`. Oracle radii
//! take the true `(tr Σ, ‖Σ‖)`; empirical radii replace them with the
//! proxies of [`crate::variance`] and spend a [`DeltaPartition`].

use std::fmt;

use crate::batch::SampleBatch;
use crate::error::{check_probability, domain, Result};
use crate::pairing::PairedStats;
use crate::rate::{bennett_h, pi_inverse, TailParams};
use crate::spectral::SymOperator;
use crate::variance::VarianceProxies;
use crate::Real;

/// Largest intrinsic-dimension factor allowed into the tail.
const MAX_DIMENSION_RATIO: f64 = 1e12;

/// Failure-probability budget `δ₁ + δ₂ + δ₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPartition<T> {
    pub delta1: T,
    pub delta2: T,
    pub delta3: T,
}

impl<T: Real> DeltaPartition<T> {
    pub fn new(delta1: T, delta2: T, delta3: T) -> Result<Self> {
        check_probability("delta1", delta1)?;
        check_probability("delta2", delta2)?;
        check_probability("delta3", delta3)?;
        let p = Self {
            delta1,
            delta2,
            delta3,
        };
        if p.total() >= T::one() {
            return domain(format!("delta1 + delta2 + delta3 = {} must be < 1", p.total()));
        }
        Ok(p)
    }

    pub fn total(&self) -> T {
        self.delta1 + self.delta2 + self.delta3
    }
}

/// `((n − 2)δ/n, δ/n, δ/n)`, under which the empirical Bernstein radius is
/// asymptotically equivalent to the intrinsic oracle.
pub fn delta_schedule<T: Real>(n: usize, delta: T) -> Result<DeltaPartition<T>> {
    if n < 4 {
        return domain(format!("delta schedule needs n >= 4, got {n}"));
    }
    check_probability("delta", delta)?;
    let nn = T::count(n);
    DeltaPartition::new(
        T::count(n - 2) * delta / nn,
        delta / nn,
        delta / nn,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    OracleBennett,
    OracleBernstein,
    AmbientBernstein,
    EmpiricalBennett,
    EmpiricalBernstein,
    IntrinsicDimCi,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::OracleBennett => "oracle-bennett",
            Method::OracleBernstein => "oracle-bernstein",
            Method::AmbientBernstein => "ambient-bernstein",
            Method::EmpiricalBennett => "empirical-bennett",
            Method::EmpiricalBernstein => "empirical-bernstein",
            Method::IntrinsicDimCi => "intrinsic-dim-ci",
        })
    }
}

/// Closed interval; `upper` is `+∞` when the lower norm proxy vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Interval<T> {
    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn half_width(&self) -> T {
        (self.upper - self.lower) / T::lit(2.0)
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport<T> {
    pub method: Method,
    /// Radius for `‖S_n/n − μ‖` (zero for interval reports).
    pub radius: T,
    /// Radius for `sup_{i≤n} ‖S_i − iμ‖`, i.e. `n · radius`.
    pub sup_radius: T,
    pub interval: Option<Interval<T>>,
    pub partition: DeltaPartition<T>,
    pub proxies: Option<VarianceProxies<T>>,
    /// Bound on the centered summands used in the tail.
    pub c_eff: T,
    pub n_used: usize,
    pub discarded: usize,
}

/// Operator Bennett tail with known variance,
/// `2 (tr(V_n/n)/σ²) exp(−(nσ²/c²) h(c r/(nσ²)))`, for `σ² ∈ [‖V_n/n‖, tr(V_n/n)]`.
pub fn oracle_bennett_tail<T: Real>(
    v_n: &SymOperator<T>,
    sigma_sq: T,
    c: T,
    n: usize,
    r: T,
) -> Result<T> {
    if n == 0 || !(c > T::zero()) || !(r >= T::zero()) {
        return domain("oracle_bennett_tail requires n >= 1, c > 0, r >= 0");
    }
    let per = v_n.scale(T::one() / T::count(n));
    let (norm, trace) = (per.op_norm()?, per.trace());
    let tol = T::validation_tol() * T::one().max(trace);
    if !(sigma_sq > T::zero()) || sigma_sq < norm - tol || sigma_sq > trace + tol {
        return domain(format!(
            "sigma^2 = {sigma_sq} outside [‖V_n/n‖, tr(V_n/n)] = [{norm}, {trace}]"
        ));
    }
    let nv = T::count(n) * sigma_sq;
    let exponent = nv / (c * c) * bennett_h(c * r / nv)?;
    Ok(T::lit(2.0) * trace / sigma_sq * (-exponent).exp())
}

fn bernstein_form<T: Real>(sigma_sq: T, c_eff: T, n: usize, log_arg: T) -> T {
    let l = log_arg.ln();
    let nn = T::count(n);
    (T::lit(2.0) * sigma_sq * l / nn).sqrt() + c_eff * l / (T::lit(3.0) * nn)
}

/// Intrinsic-dimension Bernstein radius with known variance,
/// `√(2σ² L/n) + c_eff L/(3n)` with `L = log((tr Σ/σ²)(2/δ))`.
///
/// `c_eff` bounds `‖X_i − μ‖` (`2c` in general, `c` for PSD-bounded data).
pub fn oracle_bernstein_radius<T: Real>(
    trace_sigma: T,
    sigma_sq: T,
    c_eff: T,
    n: usize,
    delta: T,
) -> Result<T> {
    check_probability("delta", delta)?;
    if !(sigma_sq > T::zero()) {
        return domain(format!("sigma^2 must be positive, got {sigma_sq}"));
    }
    if trace_sigma < sigma_sq * (T::one() - T::validation_tol()) {
        return domain(format!("tr(Σ) = {trace_sigma} below σ² = {sigma_sq}"));
    }
    if n == 0 || !(c_eff > T::zero()) {
        return domain("oracle radius requires n >= 1 and c_eff > 0");
    }
    let ratio = (trace_sigma / sigma_sq).max(T::one());
    Ok(bernstein_form(sigma_sq, c_eff, n, ratio * T::lit(2.0) / delta))
}

/// Ambient-dimension baseline: the intrinsic ratio replaced by `2d`.
pub fn ambient_bernstein_radius<T: Real>(
    sigma_sq: T,
    c_eff: T,
    n: usize,
    delta: T,
    d: usize,
) -> Result<T> {
    check_probability("delta", delta)?;
    if d == 0 {
        return domain("ambient dimension must be at least 1");
    }
    if !(sigma_sq > T::zero()) || n == 0 || !(c_eff > T::zero()) {
        return domain("ambient radius requires sigma^2 > 0, n >= 1, c_eff > 0");
    }
    Ok(bernstein_form(sigma_sq, c_eff, n, T::count(2 * d) * T::lit(2.0) / delta))
}

/// Clamped proxies entering the tail.
fn tail_params<T: Real>(stats: &PairedStats<T>, proxies: &VarianceProxies<T>) -> Result<TailParams<T>> {
    let sigma = proxies.sigma_u_sq.max(T::min_positive_value());
    let tau = proxies
        .tau_u
        .max(T::zero())
        .min(sigma * T::lit(MAX_DIMENSION_RATIO));
    TailParams::new(stats.n_used, stats.c_eff(), sigma, tau)
}

fn empirical_report<T: Real>(
    method: Method,
    stats: &PairedStats<T>,
    partition: DeltaPartition<T>,
    sup_radius: T,
    proxies: VarianceProxies<T>,
) -> BoundReport<T> {
    BoundReport {
        method,
        radius: sup_radius / T::count(stats.n_used),
        sup_radius,
        interval: None,
        partition,
        proxies: Some(proxies),
        c_eff: stats.c_eff(),
        n_used: stats.n_used,
        discarded: stats.discarded,
    }
}

/// Empirical Bennett radius `Π⁻¹(δ₁)/n` from precomputed auxiliary statistics.
pub fn empirical_bennett_from_stats<T: Real>(
    stats: &PairedStats<T>,
    partition: DeltaPartition<T>,
) -> Result<BoundReport<T>> {
    let proxies = VarianceProxies::compute(stats, partition.delta2, partition.delta3)?;
    let params = tail_params(stats, &proxies)?;
    let sup = pi_inverse(&params, partition.delta1)?;
    Ok(empirical_report(Method::EmpiricalBennett, stats, partition, sup, proxies))
}

/// Empirical Bernstein radius
/// `R_n = σ_u √(2L/n) + c_eff L/(3n)`, `L = log((2/δ₁) max(τ_u/σ_u², 1))`.
pub fn empirical_bernstein_from_stats<T: Real>(
    stats: &PairedStats<T>,
    partition: DeltaPartition<T>,
) -> Result<BoundReport<T>> {
    let proxies = VarianceProxies::compute(stats, partition.delta2, partition.delta3)?;
    let params = tail_params(stats, &proxies)?;
    let log_arg = T::lit(2.0) / partition.delta1 * params.dimension_factor();
    let radius = bernstein_form(params.sigma_u_sq, params.c_eff, stats.n_used, log_arg);
    let sup = radius * T::count(stats.n_used);
    Ok(empirical_report(Method::EmpiricalBernstein, stats, partition, sup, proxies))
}

pub fn empirical_bennett_radius<T: Real>(
    batch: &SampleBatch<T>,
    partition: DeltaPartition<T>,
) -> Result<BoundReport<T>> {
    empirical_bennett_from_stats(&PairedStats::dense(batch)?, partition)
}

pub fn empirical_bernstein_radius<T: Real>(
    batch: &SampleBatch<T>,
    partition: DeltaPartition<T>,
) -> Result<BoundReport<T>> {
    empirical_bernstein_from_stats(&PairedStats::dense(batch)?, partition)
}

/// Almost-sure limit of `√n R_n` under [`delta_schedule`]:
/// `√(2‖Σ‖ log((2/δ) tr(Σ)/‖Σ‖))`.
pub fn sharpness_limit<T: Real>(trace_sigma: T, sigma_norm: T, delta: T) -> Result<T> {
    check_probability("delta", delta)?;
    if !(sigma_norm > T::zero()) || trace_sigma < sigma_norm * (T::one() - T::validation_tol()) {
        return domain(format!(
            "sharpness limit needs 0 < ‖Σ‖ <= tr(Σ) (got {sigma_norm}, {trace_sigma})"
        ));
    }
    let ratio = (trace_sigma / sigma_norm).max(T::one());
    Ok((T::lit(2.0) * sigma_norm * (T::lit(2.0) / delta * ratio).ln()).sqrt())
}

/// Confidence interval `[max(1, τ_l/σ_u²), τ_u/σ_l²]` for `tr(Σ)/‖Σ‖`.
///
/// Each side fails with probability at most `δ₂ + δ₃`. In the report,
/// `partition.delta1` holds the budget `δ₂ + δ₃` of the mirrored side so that
/// `partition.total()` is the two-sided level `2(δ₂ + δ₃)`.
pub fn intrinsic_dim_from_stats<T: Real>(
    stats: &PairedStats<T>,
    delta2: T,
    delta3: T,
) -> Result<BoundReport<T>> {
    let proxies = VarianceProxies::compute(stats, delta2, delta3)?;
    let lower = (proxies.tau_l / proxies.sigma_u_sq).max(T::one());
    let upper = if proxies.sigma_l_sq > T::zero() {
        (proxies.tau_u / proxies.sigma_l_sq).max(lower)
    } else {
        T::infinity()
    };
    let partition = DeltaPartition::new(delta2 + delta3, delta2, delta3)?;
    Ok(BoundReport {
        method: Method::IntrinsicDimCi,
        radius: T::zero(),
        sup_radius: T::zero(),
        interval: Some(Interval { lower, upper }),
        partition,
        proxies: Some(proxies),
        c_eff: stats.c_eff(),
        n_used: stats.n_used,
        discarded: stats.discarded,
    })
}

pub fn intrinsic_dim_interval<T: Real>(
    batch: &SampleBatch<T>,
    delta2: T,
    delta3: T,
) -> Result<BoundReport<T>> {
    intrinsic_dim_from_stats(&PairedStats::dense(batch)?, delta2, delta3)
}

/// Limit `K` of `√n` times either one-sided width of the intrinsic-dimension
/// interval around `tr(Σ_n)/‖Σ_n‖`:
/// `2(√(V(tr X′) log(2/δ₂))/‖Σ‖ + tr(Σ)√(tr(Σ′) log(4/δ₃))/‖Σ‖²)`.
///
/// `trace_sigma_prime` is the trace of the variance of `X′`, the almost-sure
/// limit of `τ′_u`.
pub fn asymptotic_k<T: Real>(
    var_trace_xprime: T,
    trace_sigma: T,
    sigma_norm: T,
    trace_sigma_prime: T,
    delta2: T,
    delta3: T,
) -> Result<T> {
    check_probability("delta2", delta2)?;
    check_probability("delta3", delta3)?;
    if !(sigma_norm > T::zero()) {
        return domain(format!("asymptotic_k needs ‖Σ‖ > 0, got {sigma_norm}"));
    }
    if var_trace_xprime < T::zero() || trace_sigma_prime < T::zero() || trace_sigma < T::zero() {
        return domain("moments must be nonnegative");
    }
    let first = (var_trace_xprime * (T::lit(2.0) / delta2).ln()).sqrt() / sigma_norm;
    let second = trace_sigma * (trace_sigma_prime * (T::lit(4.0) / delta3).ln()).sqrt()
        / (sigma_norm * sigma_norm);
    Ok(T::lit(2.0) * (first + second))
}
