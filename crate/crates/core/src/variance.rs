//! Data-driven proxies for `tr(Σ)`, `‖Σ‖` and `tr(Var X′)`.
//!
//! Trace proxies apply the scalar empirical Bernstein bound to the traces of
//! the auxiliary operators; norm proxies shift `‖Σ_n‖` by the trace-Bernstein
//! margin evaluated at an upper proxy for the fourth-moment trace. The norm
//! proxies spend their failure budget `δ₃` as `δ₃/2 + δ₃/2`.

use crate::empirical::{mp_margin, ScalarBatch};
use crate::error::{check_probability, domain, Result};
use crate::pairing::PairedStats;
use crate::rate::gamma_margin;
use crate::spectral::{mean_operator, SymOperator};
use crate::Real;

/// `Σ_n`, the mean of the first-order auxiliary operators.
pub fn empirical_sigma<T: Real>(x_prime: &[SymOperator<T>]) -> Result<SymOperator<T>> {
    mean_operator(x_prime)
}

/// Upper proxy for `tr(Σ)`: `mean(Z) + margin(Z, δ₂)`.
pub fn tau_upper<T: Real>(z: &ScalarBatch<T>, delta2: T) -> Result<T> {
    Ok(z.mean() + mp_margin(z, delta2)?)
}

/// Upper proxy for the fourth-moment trace, from `Z′ = tr(X″)`.
pub fn tau_upper_prime<T: Real>(z_prime: &ScalarBatch<T>, delta: T) -> Result<T> {
    Ok(z_prime.mean() + mp_margin(z_prime, delta)?)
}

/// Lower proxy for `tr(Σ)`. Not clamped at zero.
pub fn tau_lower<T: Real>(z: &ScalarBatch<T>, delta2: T) -> Result<T> {
    Ok(z.mean() - mp_margin(z, delta2)?)
}

/// `σ_u²(τ; δ) = ‖Σ_n‖ + Γ_{c,δ}(τ)`; valid when `τ ≥ tr(Var X′)`.
pub fn sigma_upper_sq_at<T: Real>(
    tau: T,
    sigma_n: &SymOperator<T>,
    c: T,
    delta: T,
    half_n: usize,
) -> Result<T> {
    Ok(sigma_n.op_norm()? + gamma_margin(tau, c, delta, half_n)?)
}

/// `σ_l²(τ; δ) = max(0, ‖Σ_n‖ − Γ_{c,δ}(τ))`.
pub fn sigma_lower_sq_at<T: Real>(
    tau: T,
    sigma_n: &SymOperator<T>,
    c: T,
    delta: T,
    half_n: usize,
) -> Result<T> {
    Ok((sigma_n.op_norm()? - gamma_margin(tau, c, delta, half_n)?).max(T::zero()))
}

/// A norm proxy together with the quantities it was composed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormProxy<T> {
    pub value: T,
    /// `τ′_u(δ₃/2)`.
    pub tau_u_prime: T,
    /// Failure probability handed to each of the two inner bounds.
    pub inner_delta: T,
    /// `Γ_{c, δ₃/2}(τ′_u(δ₃/2))`.
    pub margin: T,
}

fn norm_margin<T: Real>(stats: &PairedStats<T>, delta3: T) -> Result<(T, T, T)> {
    check_probability("delta3", delta3)?;
    let inner = delta3 / T::lit(2.0);
    let tau_prime = tau_upper_prime(&stats.z_prime, inner)?;
    let margin = gamma_margin(tau_prime, stats.c, inner, stats.half_n())?;
    Ok((tau_prime, inner, margin))
}

/// `σ_u²(δ₃) = σ_u²(τ′_u(δ₃/2); δ₃/2)`.
pub fn sigma_upper_sq<T: Real>(stats: &PairedStats<T>, delta3: T) -> Result<NormProxy<T>> {
    let (tau_u_prime, inner_delta, margin) = norm_margin(stats, delta3)?;
    Ok(NormProxy {
        value: stats.sigma_n_norm + margin,
        tau_u_prime,
        inner_delta,
        margin,
    })
}

/// `σ_l²(δ₃) = σ_l²(τ′_u(δ₃/2); δ₃/2)`.
pub fn sigma_lower_sq<T: Real>(stats: &PairedStats<T>, delta3: T) -> Result<NormProxy<T>> {
    let (tau_u_prime, inner_delta, margin) = norm_margin(stats, delta3)?;
    Ok(NormProxy {
        value: (stats.sigma_n_norm - margin).max(T::zero()),
        tau_u_prime,
        inner_delta,
        margin,
    })
}

/// All proxies at a fixed `(δ₂, δ₃)`.
#[derive(Debug, Clone)]
pub struct VarianceProxies<T> {
    /// `Σ_n`; absent for implicitly represented (kernel, diagonal) inputs.
    pub sigma_n: Option<SymOperator<T>>,
    /// `Σ′_n`, the mean of the second-order operators.
    pub sigma_n_prime: Option<SymOperator<T>>,
    pub trace_sigma_n: T,
    pub sigma_n_norm: T,
    pub tau_u: T,
    pub tau_l: T,
    pub tau_u_prime: T,
    pub sigma_u_sq: T,
    pub sigma_l_sq: T,
    pub delta2: T,
    pub delta3: T,
}

impl<T: Real> VarianceProxies<T> {
    pub fn compute(stats: &PairedStats<T>, delta2: T, delta3: T) -> Result<Self> {
        check_probability("delta2", delta2)?;
        if stats.z.len() < 2 || stats.z_prime.len() < 2 {
            return domain("proxies need n/2 >= 2 and n/4 >= 2");
        }
        let upper = sigma_upper_sq(stats, delta3)?;
        let lower = sigma_lower_sq(stats, delta3)?;
        Ok(Self {
            sigma_n: stats.sigma_n.clone(),
            sigma_n_prime: stats.sigma_n_prime.clone(),
            trace_sigma_n: stats.trace_sigma_n(),
            sigma_n_norm: stats.sigma_n_norm,
            tau_u: tau_upper(&stats.z, delta2)?,
            tau_l: tau_lower(&stats.z, delta2)?,
            tau_u_prime: upper.tau_u_prime,
            sigma_u_sq: upper.value,
            sigma_l_sq: lower.value,
            delta2,
            delta3,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::SampleBatch;

    fn constant_stats(n: usize) -> PairedStats<f64> {
        let items = vec![SymOperator::diagonal(&[0.4, 0.2]); n];
        PairedStats::dense(&SampleBatch::new(items, 1.0, 1.0, true).unwrap()).unwrap()
    }

    #[test]
    fn degenerate_batch_proxies_are_pure_margins() {
        let n = 40;
        let stats = constant_stats(n);
        let delta = 0.05f64;
        let (b, c) = (1.0f64, 1.0f64);
        let half = (n / 2) as f64;
        let quarter = (n / 4) as f64;
        let l2 = (2.0 / delta).ln();
        let p = VarianceProxies::compute(&stats, delta, delta).unwrap();
        assert!((p.tau_u - 7.0 * 2.0 * b * l2 / (3.0 * (half - 1.0))).abs() < 1e-14);
        assert!((p.tau_l + 7.0 * 2.0 * b * l2 / (3.0 * (half - 1.0))).abs() < 1e-14);

        let l4 = (4.0 / delta).ln();
        let tau_prime = 7.0 * 4.0 * b * c * c * l4 / (3.0 * (quarter - 1.0));
        assert!((p.tau_u_prime - tau_prime).abs() < 1e-14);
        let gamma = (2.0 * tau_prime * l4 / half).sqrt() + 2.0 * c * c * l4 / (3.0 * half);
        assert!((p.sigma_u_sq - gamma).abs() < 1e-14);
        assert_eq!(p.sigma_l_sq, 0.0);
    }

    #[test]
    fn sigma_upper_at_zero_inputs() {
        let zero = SymOperator::<f64>::zeros(2);
        let got = sigma_upper_sq_at(0.0, &zero, 1.0, 0.05, 10).unwrap();
        let want = 2.0 * (2.0f64 / 0.05).ln() / 30.0;
        assert!((got - want).abs() < 1e-15);
        let s = SymOperator::diagonal(&[0.3, 0.1]);
        let diff = sigma_upper_sq_at(0.7, &s, 1.0, 0.05, 10).unwrap() - 0.3;
        assert_eq!(diff, gamma_margin(0.7, 1.0, 0.05, 10).unwrap() + 0.3 - 0.3);
    }

    #[test]
    fn inner_delta_is_half() {
        let stats = constant_stats(16);
        let up = sigma_upper_sq(&stats, 0.1).unwrap();
        assert_eq!(up.inner_delta, 0.05);
        assert_eq!(up.tau_u_prime, tau_upper_prime(&stats.z_prime, 0.05).unwrap());
        let sigma_n = stats.sigma_n.as_ref().unwrap();
        let composed = sigma_upper_sq_at(up.tau_u_prime, sigma_n, 1.0, 0.05, stats.half_n()).unwrap();
        assert_eq!(up.value, composed);
    }

    #[test]
    fn empirical_sigma_examples() {
        let a = SymOperator::diagonal(&[0.2f64, 0.1]);
        assert_eq!(empirical_sigma(std::slice::from_ref(&a)).unwrap(), a);
        let m = empirical_sigma(&[SymOperator::diagonal(&[1.0f64, 0.0]), SymOperator::diagonal(&[0.0, 1.0])]).unwrap();
        assert_eq!(m, SymOperator::diagonal(&[0.5, 0.5]));
        assert!(empirical_sigma::<f64>(&[]).is_err());
    }

    #[test]
    fn small_batches_are_rejected() {
        let items = vec![SymOperator::diagonal(&[0.4f64]); 4];
        assert!(PairedStats::dense(&SampleBatch::new(items, 1.0, 1.0, true).unwrap()).is_err());
    }
}
