//! Dense symmetric operators and the spectral primitives (trace, operator
//! norm, square) the rest of the crate is built on.

use std::ops::{Add, Mul, Sub};

use crate::eigen::symmetric_eigenvalues;
use crate::error::{domain, BoundError, Result};
use crate::Real;

/// Relative asymmetry accepted (and then removed) on construction.
const ASYMMETRY_TOL: f64 = 1e-8;

/// Dense real symmetric `dim × dim` matrix, stored row-major.
///
/// Entries are exactly symmetric: construction replaces `E` by `(E + Eᵀ)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOperator<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> SymOperator<T> {
    /// Builds an operator from row-major entries, symmetrizing them.
    ///
    /// Inputs whose asymmetry exceeds `1e-8 · ‖E‖_F` are rejected.
    pub fn from_row_major(dim: usize, entries: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return domain("operator dimension must be at least 1");
        }
        if entries.len() != dim * dim {
            return Err(BoundError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(BoundError::Numeric("non-finite operator entry".into()));
        }
        let frob = entries.iter().map(|&x| x * x).sum::<T>().sqrt();
        let mut worst = T::zero();
        for i in 0..dim {
            for j in 0..i {
                worst = worst.max((entries[i * dim + j] - entries[j * dim + i]).abs());
            }
        }
        if worst > T::lit(ASYMMETRY_TOL) * frob {
            return domain(format!(
                "matrix is not symmetric (max asymmetry {worst}, norm {frob})"
            ));
        }
        let mut op = Self { dim, entries };
        op.symmetrize();
        Ok(op)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return domain("rows must form a square matrix");
        }
        Self::from_row_major(dim, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be at least 1");
        Self {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut op = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            op.entries[i * op.dim + i] = x;
        }
        op
    }

    /// `v vᵀ`.
    pub fn outer(v: &[T]) -> Self {
        let dim = v.len();
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                op.entries[i * dim + j] = v[i] * v[j];
            }
        }
        op
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        symmetric_eigenvalues(&self.entries, self.dim)
    }

    /// `max |λ|` over the spectrum.
    pub fn op_norm(&self) -> Result<T> {
        let ev = self.eigenvalues()?;
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }

    /// `A · A`, symmetrized to remove rounding asymmetry.
    pub fn square(&self) -> Self {
        let d = self.dim;
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for j in i..d {
                let mut acc = T::zero();
                for k in 0..d {
                    acc = acc + self.entries[i * d + k] * self.entries[k * d + j];
                }
                out[i * d + j] = acc;
                out[j * d + i] = acc;
            }
        }
        Self { dim: d, entries: out }
    }

    /// `tr(A²) = ‖A‖_F²` without forming the product.
    pub fn trace_of_square(&self) -> T {
        self.entries.iter().map(|&x| x * x).sum()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        let diff = self.try_sub(other)?;
        Ok(diff.entries.iter().fold(T::zero(), |m, x| m.max(x.abs())))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.dim != other.dim {
            return Err(BoundError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn symmetrize(&mut self) {
        let d = self.dim;
        let half = T::lit(0.5);
        for i in 0..d {
            for j in 0..i {
                let m = (self.entries[i * d + j] + self.entries[j * d + i]) * half;
                self.entries[i * d + j] = m;
                self.entries[j * d + i] = m;
            }
        }
    }
}

impl<T: Real> Add for &SymOperator<T> {
    type Output = SymOperator<T>;

    fn add(self, rhs: Self) -> SymOperator<T> {
        self.try_add(rhs).expect("operator dimensions agree")
    }
}

impl<T: Real> Sub for &SymOperator<T> {
    type Output = SymOperator<T>;

    fn sub(self, rhs: Self) -> SymOperator<T> {
        self.try_sub(rhs).expect("operator dimensions agree")
    }
}

impl<T: Real> Mul<T> for &SymOperator<T> {
    type Output = SymOperator<T>;

    fn mul(self, rhs: T) -> SymOperator<T> {
        self.scale(rhs)
    }
}

/// Arithmetic mean of a nonempty operator sequence.
pub fn mean_operator<T: Real>(items: &[SymOperator<T>]) -> Result<SymOperator<T>> {
    let first = items
        .first()
        .ok_or_else(|| BoundError::Domain("mean of an empty operator sequence".into()))?;
    let mut acc = SymOperator::zeros(first.dim());
    for item in items {
        acc = acc.try_add(item)?;
    }
    Ok(acc.scale(T::one() / T::count(items.len())))
}
