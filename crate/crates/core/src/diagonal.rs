//! Fast path for commuting (simultaneously diagonal) observations.
//!
//! Only the `d` eigenvalue coordinates of each observation are stored, so
//! pairing and the proxies cost `O(n d)`.

use crate::batch::bound_tolerance;
use crate::empirical::ScalarBatch;
use crate::error::{domain, Result};
use crate::pairing::PairedStats;
use crate::spectral::SymOperator;
use crate::Real;

/// `n` diagonal observations stored as an `n × d` row-major array.
#[derive(Debug, Clone)]
pub struct DiagonalBatch<T> {
    coords: Vec<T>,
    dim: usize,
    c: T,
    b: T,
    psd_bounded: bool,
}

impl<T: Real> DiagonalBatch<T> {
    pub fn new(coords: Vec<T>, dim: usize, c: T, b: T, psd_bounded: bool) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return domain("coordinates must form an n x d array with d >= 1");
        }
        if !(c > T::zero()) || !(b > T::zero()) {
            return domain("bounds must be positive");
        }
        let n = coords.len() / dim;
        if n < 4 {
            return domain(format!("a batch needs at least 4 items, got {n}"));
        }
        let tol = bound_tolerance(c, b);
        for (i, row) in coords.chunks_exact(dim).enumerate() {
            let mut sq = T::zero();
            for &x in row {
                if !x.is_finite() || x.abs() > c + tol || (psd_bounded && x < -tol) {
                    return domain(format!("item {i}: coordinate {x} violates the certified bounds"));
                }
                sq = sq + x * x;
            }
            if sq > b + tol {
                return domain(format!("item {i}: tr(X²) = {sq} exceeds B = {b}"));
            }
        }
        Ok(Self {
            coords,
            dim,
            c,
            b,
            psd_bounded,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn psd_bounded(&self) -> bool {
        self.psd_bounded
    }

    /// Coordinates of `S_n/n`.
    pub fn mean(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim];
        for row in self.coords.chunks_exact(self.dim) {
            for (a, &x) in acc.iter_mut().zip(row) {
                *a = *a + x;
            }
        }
        let n = T::count(self.len());
        acc.into_iter().map(|a| a / n).collect()
    }

    /// Dense copy, for cross-checking against the general path.
    pub fn to_dense(&self) -> Vec<SymOperator<T>> {
        self.coords
            .chunks_exact(self.dim)
            .map(SymOperator::diagonal)
            .collect()
    }

    pub fn stats(&self) -> Result<PairedStats<T>> {
        let d = self.dim;
        let n_used = self.len() / 4 * 4;
        let half = T::lit(0.5);
        let first: Vec<T> = self.coords[..n_used * d]
            .chunks_exact(2 * d)
            .flat_map(|pair| {
                (0..d).map(move |k| {
                    let diff = pair[k] - pair[d + k];
                    half * diff * diff
                })
            })
            .collect();
        let second: Vec<T> = first
            .chunks_exact(2 * d)
            .flat_map(|pair| {
                (0..d).map(move |k| {
                    let diff = pair[k] - pair[d + k];
                    half * diff * diff
                })
            })
            .collect();
        let traces = |v: &[T]| v.chunks_exact(d).map(|r| r.iter().copied().sum()).collect::<Vec<T>>();
        let two = T::lit(2.0);
        let z = ScalarBatch::new(traces(&first), two * self.b)?;
        let z_prime = ScalarBatch::new(traces(&second), two * two * self.b * self.c * self.c)?;
        let sigma_n = SymOperator::diagonal(&column_means(&first, d));
        let sigma_n_prime = SymOperator::diagonal(&column_means(&second, d));
        let sigma_n_norm = sigma_n.diag().into_iter().fold(T::zero(), |m, x| m.max(x.abs()));
        Ok(PairedStats {
            z,
            z_prime,
            sigma_n_norm,
            sigma_n: Some(sigma_n),
            sigma_n_prime: Some(sigma_n_prime),
            c: self.c,
            b: self.b,
            psd_bounded: self.psd_bounded,
            n_used,
            discarded: self.len() - n_used,
        })
    }
}

fn column_means<T: Real>(values: &[T], d: usize) -> Vec<T> {
    let mut acc = vec![T::zero(); d];
    for row in values.chunks_exact(d) {
        for (a, &x) in acc.iter_mut().zip(row) {
            *a = *a + x;
        }
    }
    let rows = T::count(values.len() / d);
    acc.into_iter().map(|a| a / rows).collect()
}
