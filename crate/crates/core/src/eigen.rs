//! Eigenvalues of dense real symmetric matrices.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson-style shifts (EISPACK `tred1` / `tql1`).
//! Only eigenvalues are formed; no transformation is accumulated.

use crate::error::{BoundError, Result};
use crate::Real;

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues, ascending, of the symmetric `n × n` row-major matrix `a`.
///
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    if a.len() != n * n {
        return Err(BoundError::DimensionMismatch {
            expected: n * n,
            got: a.len(),
        });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(BoundError::Numeric(
            "non-finite entry in symmetric eigensolve".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = a.to_vec();
    let (mut d, mut e) = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Reduces `a` in place; returns the diagonal and the sub-diagonal
/// (`e[i]` couples `d[i]` and `d[i + 1]`, `e[n - 1] = 0`).
fn tridiagonalize<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];

    // mirror the lower triangle so row access is contiguous
    for i in 0..n {
        for j in 0..i {
            a[j * n + i] = a[i * n + j];
        }
    }

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let scale: T = (k + 1..n).map(|i| a[i * n + k].abs()).sum();
        if scale == T::zero() {
            d[k] = a[k * n + k];
            e[k] = T::zero();
            continue;
        }
        let mut norm_sq = T::zero();
        for (idx, i) in (k + 1..n).enumerate() {
            v[idx] = a[i * n + k] / scale;
            norm_sq = norm_sq + v[idx] * v[idx];
        }
        let norm = norm_sq.sqrt();
        let alpha = if v[0] > T::zero() { -norm } else { norm };
        // v <- x - alpha e1; H = I - beta v v^T
        let h = norm_sq - v[0] * alpha;
        v[0] = v[0] - alpha;
        let beta = T::one() / h;

        // p = beta * A22 v
        for (r, pr) in p.iter_mut().enumerate().take(m) {
            let row = (k + 1 + r) * n + k + 1;
            let acc = a[row..row + m]
                .iter()
                .zip(&v[..m])
                .fold(T::zero(), |s, (&x, &y)| s + x * y);
            *pr = beta * acc;
        }
        // q = p - (beta/2)(v^T p) v
        let mut vp = T::zero();
        for r in 0..m {
            vp = vp + v[r] * p[r];
        }
        let kappa = beta * vp / T::lit(2.0);
        for r in 0..m {
            p[r] = p[r] - kappa * v[r];
        }
        // A22 <- A22 - v q^T - q v^T
        for r in 0..m {
            let row = (k + 1 + r) * n + k + 1;
            let (vr, qr) = (v[r], p[r]);
            for c in 0..m {
                a[row + c] = a[row + c] - vr * p[c] - qr * v[c];
            }
        }
        d[k] = a[k * n + k];
        e[k] = alpha * scale;
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    e[n - 1] = T::zero();
    (d, e)
}

fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let two = T::lit(2.0);
    // negligibility is judged against the largest row seen so far, so
    // clusters of near-zero eigenvalues still deflate
    let mut scale = T::zero();
    for l in 0..n {
        scale = scale.max(d[l].abs() + e[l].abs());
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = (d[m].abs() + d[m + 1].abs()).max(scale);
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(BoundError::Numeric(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let signed_r = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let a = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let ev = symmetric_eigenvalues(&a, 3).unwrap();
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn tridiagonal_toeplitz_closed_form() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(k pi / (n + 1))
        let n = 12;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[(i + 1) * n + i] = -1.0;
                a[i * n + i + 1] = -1.0;
            }
        }
        let ev = symmetric_eigenvalues(&a, n).unwrap();
        for (k, got) in ev.iter().enumerate() {
            let want = 2.0
                - 2.0 * (((k + 1) as f64) * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rank_one_all_ones() {
        let n = 7;
        let a = vec![1.0f64; n * n];
        let ev = symmetric_eigenvalues(&a, n).unwrap();
        assert!((ev[n - 1] - n as f64).abs() < 1e-12);
        for x in &ev[..n - 1] {
            assert!(x.abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let a = [1.0, f64::NAN, f64::NAN, 1.0];
        assert!(matches!(
            symmetric_eigenvalues(&a, 2),
            Err(BoundError::Numeric(_))
        ));
    }

    #[test]
    fn single_precision() {
        let a = [2.0f32, 1.0, 1.0, 2.0];
        let ev = symmetric_eigenvalues(&a, 2).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-6 && (ev[1] - 3.0).abs() < 1e-6);
    }
}
