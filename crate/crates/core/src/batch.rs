use crate::error::{domain, BoundError, Result};
use crate::spectral::SymOperator;
use crate::Real;

/// Independent observations `X_1, …, X_n` with certified bounds
/// `‖X_i‖ ≤ c` and `tr(X_i²) ≤ B`.
///
/// When `psd_bounded` is set, `0 ⪯ X_i ⪯ cI` is also certified, which lets
/// the centered summands be bounded by `c` instead of `2c`.
#[derive(Debug, Clone)]
pub struct SampleBatch<T> {
    items: Vec<SymOperator<T>>,
    c: T,
    b: T,
    psd_bounded: bool,
}

impl<T: Real> SampleBatch<T> {
    pub fn new(items: Vec<SymOperator<T>>, c: T, b: T, psd_bounded: bool) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) || !(b > T::zero() && b.is_finite()) {
            return domain(format!("bounds must be positive and finite (c = {c}, B = {b})"));
        }
        if items.len() < 4 {
            return domain(format!("a batch needs at least 4 items, got {}", items.len()));
        }
        let dim = items[0].dim();
        let tol = bound_tolerance(c, b);
        for (i, x) in items.iter().enumerate() {
            if x.dim() != dim {
                return Err(BoundError::DimensionMismatch {
                    expected: dim,
                    got: x.dim(),
                });
            }
            let ev = x.eigenvalues()?;
            let (lo, hi) = (ev[0], ev[ev.len() - 1]);
            let norm = lo.abs().max(hi.abs());
            if norm > c + tol {
                return domain(format!("item {i}: ‖X‖ = {norm} exceeds c = {c}"));
            }
            let tr_sq = x.trace_of_square();
            if tr_sq > b + tol {
                return domain(format!("item {i}: tr(X²) = {tr_sq} exceeds B = {b}"));
            }
            if psd_bounded && lo < -tol {
                return domain(format!(
                    "item {i}: min eigenvalue {lo} is negative but the batch is flagged PSD"
                ));
            }
        }
        Ok(Self {
            items,
            c,
            b,
            psd_bounded,
        })
    }

    pub fn items(&self) -> &[SymOperator<T>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].dim()
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

    /// Bound on `‖X_i − μ‖`: `c` for PSD-bounded batches, `2c` otherwise.
    pub fn c_eff(&self) -> T {
        effective_bound(self.c, self.psd_bounded)
    }

    /// `S_n / n`.
    pub fn mean(&self) -> SymOperator<T> {
        crate::spectral::mean_operator(&self.items).expect("batch is nonempty")
    }
}

pub(crate) fn bound_tolerance<T: Real>(c: T, b: T) -> T {
    T::validation_tol() * T::one().max(c).max(b)
}

pub(crate) fn effective_bound<T: Real>(c: T, psd_bounded: bool) -> T {
    if psd_bounded {
        c
    } else {
        c + c
    }
}
