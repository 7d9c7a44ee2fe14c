//! First- and second-order auxiliary sequences.
//!
//! Consecutive, non-overlapping pairs of observations give
//! `X′_i = ½(X_{2i−1} − X_{2i})²`, independent and unbiased for `Σ`; pairing
//! the `X′` once more gives `X″_i = ½(X′_{2i−1} − X′_{2i})²`, unbiased for the
//! variance of `X′`. The batch is truncated to a multiple of four so both
//! sequences use every retained observation.

use crate::batch::{bound_tolerance, SampleBatch};
use crate::empirical::ScalarBatch;
use crate::error::{domain, Result};
use crate::spectral::{mean_operator, SymOperator};
use crate::Real;

/// `½(A − B)²`.
pub fn half_squared_difference<T: Real>(a: &SymOperator<T>, b: &SymOperator<T>) -> Result<SymOperator<T>> {
    Ok(a.try_sub(b)?.square().scale(T::lit(0.5)))
}

/// `X′_i = ½(X_{2i−1} − X_{2i})²` for `i = 1..⌊n/2⌋`.
pub fn build_first_order<T: Real>(batch: &SampleBatch<T>) -> Result<Vec<SymOperator<T>>> {
    if batch.len() < 4 {
        return domain("first-order pairing needs at least 4 observations");
    }
    pair_up(batch.items())
}

/// `X″_i = ½(X′_{2i−1} − X′_{2i})²` for `i = 1..⌊len/2⌋`.
pub fn build_second_order<T: Real>(x_prime: &[SymOperator<T>]) -> Result<Vec<SymOperator<T>>> {
    if x_prime.len() < 2 {
        return domain("second-order pairing needs at least 2 first-order operators");
    }
    pair_up(x_prime)
}

fn pair_up<T: Real>(items: &[SymOperator<T>]) -> Result<Vec<SymOperator<T>>> {
    items
        .chunks_exact(2)
        .map(|p| half_squared_difference(&p[0], &p[1]))
        .collect()
}

/// Both auxiliary sequences with their certified bounds.
#[derive(Debug, Clone)]
pub struct PairedSequences<T> {
    pub x_prime: Vec<SymOperator<T>>,
    pub x_double_prime: Vec<SymOperator<T>>,
    /// Original `c`.
    pub c: T,
    /// Original `B`.
    pub b: T,
    pub psd_bounded: bool,
    /// Observations used (a multiple of four).
    pub n_used: usize,
    /// Observations dropped by the truncation.
    pub discarded: usize,
}

impl<T: Real> PairedSequences<T> {
    pub fn from_batch(batch: &SampleBatch<T>) -> Result<Self> {
        let n_used = batch.len() / 4 * 4;
        if n_used < 4 {
            return domain("pairing needs at least 4 usable observations");
        }
        let x_prime = pair_up(&batch.items()[..n_used])?;
        let x_double_prime = build_second_order(&x_prime)?;
        let paired = Self {
            x_prime,
            x_double_prime,
            c: batch.c(),
            b: batch.b(),
            psd_bounded: batch.psd_bounded(),
            n_used,
            discarded: batch.len() - n_used,
        };
        paired.certify()?;
        Ok(paired)
    }

    /// `‖X′‖ ≤ 2c²`.
    pub fn c_prime(&self) -> T {
        T::lit(2.0) * self.c * self.c
    }

    /// `tr(X′) ≤ 2B`.
    pub fn b_prime(&self) -> T {
        T::lit(2.0) * self.b
    }

    /// `tr(X″) ≤ 4Bc²`.
    pub fn b_double_prime(&self) -> T {
        T::lit(4.0) * self.b * self.c * self.c
    }

    fn certify(&self) -> Result<()> {
        let tol = bound_tolerance(self.c_prime(), self.b_double_prime());
        for (i, x) in self.x_prime.iter().enumerate() {
            let tr = x.trace();
            if tr > self.b_prime() + tol {
                return domain(format!("tr(X'_{i}) = {tr} exceeds 2B"));
            }
        }
        for (i, x) in self.x_double_prime.iter().enumerate() {
            let tr = x.trace();
            if tr > self.b_double_prime() + tol {
                return domain(format!("tr(X''_{i}) = {tr} exceeds 4Bc^2"));
            }
        }
        Ok(())
    }

    /// `(Z, Z′)` with `Z_i = tr(X′_i) ∈ [0, 2B]` and `Z′_i = tr(X″_i) ∈ [0, 4Bc²]`.
    pub fn trace_sequences(&self) -> Result<(ScalarBatch<T>, ScalarBatch<T>)> {
        let z = ScalarBatch::new(self.x_prime.iter().map(|x| x.trace()).collect(), self.b_prime())?;
        let z_prime = ScalarBatch::new(
            self.x_double_prime.iter().map(|x| x.trace()).collect(),
            self.b_double_prime(),
        )?;
        Ok((z, z_prime))
    }

    /// Reduces the sequences to the summary the proxies are computed from.
    pub fn stats(&self) -> Result<PairedStats<T>> {
        let (z, z_prime) = self.trace_sequences()?;
        let sigma_n = mean_operator(&self.x_prime)?;
        let sigma_n_prime = mean_operator(&self.x_double_prime)?;
        Ok(PairedStats {
            z,
            z_prime,
            sigma_n_norm: sigma_n.op_norm()?,
            sigma_n: Some(sigma_n),
            sigma_n_prime: Some(sigma_n_prime),
            c: self.c,
            b: self.b,
            psd_bounded: self.psd_bounded,
            n_used: self.n_used,
            discarded: self.discarded,
        })
    }
}

/// Everything the variance proxies and radii need from the auxiliary
/// sequences.
///
/// Dense batches, diagonal fast-path batches and kernel datasets all reduce
/// to this summary; only the dense path carries the operators themselves.
#[derive(Debug, Clone)]
pub struct PairedStats<T> {
    /// Traces of `X′`, bounded by `2B`.
    pub z: ScalarBatch<T>,
    /// Traces of `X″`, bounded by `4Bc²`.
    pub z_prime: ScalarBatch<T>,
    /// `‖Σ_n‖` where `Σ_n` is the mean of the `X′`.
    pub sigma_n_norm: T,
    pub sigma_n: Option<SymOperator<T>>,
    pub sigma_n_prime: Option<SymOperator<T>>,
    pub c: T,
    pub b: T,
    pub psd_bounded: bool,
    pub n_used: usize,
    pub discarded: usize,
}

impl<T: Real> PairedStats<T> {
    /// `tr(Σ_n)`, the mean of `Z`.
    pub fn trace_sigma_n(&self) -> T {
        self.z.mean()
    }

    /// Number of first-order operators, `n/2`.
    pub fn half_n(&self) -> usize {
        self.z.len()
    }

    pub fn c_eff(&self) -> T {
        crate::batch::effective_bound(self.c, self.psd_bounded)
    }

    pub fn dense(batch: &SampleBatch<T>) -> Result<Self> {
        PairedSequences::from_batch(batch)?.stats()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> SymOperator<f64> {
        SymOperator::diagonal(v)
    }

    #[test]
    fn identical_pair_gives_zero() {
        let x = diag(&[0.3, 0.7]);
        assert_eq!(half_squared_difference(&x, &x).unwrap(), SymOperator::zeros(2));
    }

    #[test]
    fn orthogonal_projectors() {
        let out = half_squared_difference(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert_eq!(out, diag(&[0.5, 0.5]));
        let out = half_squared_difference(&diag(&[1.0, 0.0]), &diag(&[0.0, 0.0])).unwrap();
        assert_eq!(out, diag(&[0.5, 0.0]));
    }

    #[test]
    fn truncates_to_multiple_of_four() {
        let items: Vec<_> = (0..10).map(|i| diag(&[i as f64 / 10.0])).collect();
        let batch = SampleBatch::new(items, 1.0, 1.0, true).unwrap();
        let paired = PairedSequences::from_batch(&batch).unwrap();
        assert_eq!(paired.n_used, 8);
        assert_eq!(paired.discarded, 2);
        assert_eq!(paired.x_prime.len(), 4);
        assert_eq!(paired.x_double_prime.len(), 2);
        assert_eq!(build_first_order(&batch).unwrap().len(), 5);
    }

    #[test]
    fn second_order_needs_two() {
        assert!(build_second_order(&[diag(&[1.0])]).is_err());
    }

    #[test]
    fn trace_sequences_match_components() {
        let items: Vec<_> = (0..8).map(|i| diag(&[(i % 3) as f64 / 3.0, 0.5])).collect();
        let batch = SampleBatch::new(items, 1.0, 2.0, true).unwrap();
        let paired = PairedSequences::from_batch(&batch).unwrap();
        let (z, zp) = paired.trace_sequences().unwrap();
        for (zi, x) in z.values().iter().zip(&paired.x_prime) {
            assert_eq!(*zi, x.trace());
        }
        assert_eq!(z.upper(), 4.0);
        assert_eq!(zp.upper(), 8.0);
    }
}
