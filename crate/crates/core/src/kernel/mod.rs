//! Operators on a reproducing-kernel Hilbert space, evaluated only through
//! Gram-matrix entries.
//!
//! Observations are the rank-one projectors `Y_i = φ(X_i) ⊗ φ(X_i)` of a
//! normalized kernel (`k(x, x) = 1`), so `‖Y_i‖ = tr(Y_i) = tr(Y_i²) = 1` and
//! `c = B = 1`. Every operator the bounds need is a finite combination
//! `Σ_{a,b} C_ab φ_a ⊗ φ_b` over a few support points ([`SpanOperator`]);
//! with `G` the Gram matrix of the support,
//!
//! * `tr(A) = tr(C G)`,
//! * `tr(A B) = tr(C_A G_AB C_B G_BA)`,
//! * the nonzero spectrum of `A` is that of `Lᵀ C L` for any `G = L Lᵀ`.
//!
//! For a pair `(a, b)` with `k = k(X_a, X_b)`, using `Y_a Y_b = k φ_a ⊗ φ_b`
//! and `Y_a² = Y_a`,
//!
//! ```text
//! Y′ = ½(Y_a − Y_b)² = ½(Y_a + Y_b − k(φ_a⊗φ_b + φ_b⊗φ_a)),  C = ½[[1, −k], [−k, 1]],
//! ```
//!
//! hence `tr(Y′) = 1 − k²`. The mean `Σ_n` of the `n/2` first-order operators
//! has coefficient matrix `M`, block diagonal with blocks `(1/n)[[1, −k], [−k, 1]]`,
//! so `‖Σ_n‖ = λ_max(K M)`. Each block is PSD (eigenvalues `(1 ± k)/n`), and
//! the eigenproblem is solved in the symmetric form `M^{1/2} K M^{1/2}`.

mod oracle;

pub use oracle::{mc_intrinsic_oracle, mc_intrinsic_oracle_in, InputDistribution, IntrinsicOracle, DEFAULT_INPUT_DIM};

use crate::eigen::symmetric_eigenvalues;
use crate::empirical::ScalarBatch;
use crate::error::{domain, BoundError, Result};
use crate::pairing::PairedStats;
use crate::Real;

/// Gaussian RBF kernel `exp(−γ ‖x − y‖²)`.
pub fn rbf_kernel<T: Real>(x: &[T], y: &[T], gamma: T) -> Result<T> {
    if x.len() != y.len() {
        return Err(BoundError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let sq: T = x.iter().zip(y).map(|(&a, &b)| (a - b) * (a - b)).sum();
    Ok((-gamma * sq).exp())
}

/// Input points with their RBF Gram matrix.
#[derive(Debug, Clone)]
pub struct KernelDataset<T> {
    points: Vec<Vec<T>>,
    gamma: T,
    gram: Vec<T>,
}

impl<T: Real> KernelDataset<T> {
    pub fn new(points: Vec<Vec<T>>, gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return domain(format!("RBF width must be positive, got {gamma}"));
        }
        let n = points.len();
        if n == 0 {
            return domain("kernel dataset needs at least one point");
        }
        let dim = points[0].len();
        let mut gram = vec![T::zero(); n * n];
        for i in 0..n {
            if points[i].len() != dim {
                return Err(BoundError::DimensionMismatch {
                    expected: dim,
                    got: points[i].len(),
                });
            }
            gram[i * n + i] = T::one();
            for j in 0..i {
                let k = rbf_kernel(&points[i], &points[j], gamma)?;
                gram[i * n + j] = k;
                gram[j * n + i] = k;
            }
        }
        Ok(Self { points, gamma, gram })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    #[inline]
    pub fn k(&self, i: usize, j: usize) -> T {
        self.gram[i * self.len() + j]
    }

    pub fn gram(&self) -> &[T] {
        &self.gram
    }

    /// Points used after truncating to a multiple of four.
    pub fn n_used(&self) -> usize {
        self.len() / 4 * 4
    }

    fn require_usable(&self) -> Result<usize> {
        let n = self.n_used();
        if n < 8 {
            return domain(format!("kernel proxies need at least 8 usable points, got {n}"));
        }
        Ok(n)
    }

    /// First-order operator built from points `2i` and `2i + 1`.
    pub fn first_order(&self, i: usize) -> SpanOperator<T> {
        SpanOperator::first_order(2 * i, 2 * i + 1, self.k(2 * i, 2 * i + 1))
    }

    /// Second-order operator built from first-order operators `2j`, `2j + 1`
    /// (points `4j..4j + 4`), as `½ D²` with `D = Y′_{2j} − Y′_{2j+1}`.
    pub fn second_order_difference(&self, j: usize) -> SpanOperator<T> {
        self.first_order(2 * j).difference(&self.first_order(2 * j + 1))
    }

    /// Sub-Gram matrix over a support.
    pub fn support_gram(&self, support: &[usize]) -> Vec<T> {
        let m = support.len();
        let mut g = vec![T::zero(); m * m];
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                g[a * m + b] = self.k(i, j);
            }
        }
        g
    }

    pub fn paired_stats(&self) -> Result<PairedStats<T>> {
        let n_used = self.require_usable()?;
        Ok(PairedStats {
            z: kernel_z(self)?,
            z_prime: kernel_z_prime(self)?,
            sigma_n_norm: kernel_sigma_norm(self)?,
            sigma_n: None,
            sigma_n_prime: None,
            c: T::one(),
            b: T::one(),
            psd_bounded: true,
            n_used,
            discarded: self.len() - n_used,
        })
    }
}

/// Operator `Σ_{a,b} coeff[a][b] φ(X_{support[a]}) ⊗ φ(X_{support[b]})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanOperator<T> {
    pub support: Vec<usize>,
    /// Symmetric `m × m`, row-major.
    pub coeff: Vec<T>,
}

impl<T: Real> SpanOperator<T> {
    /// `½(Y_a − Y_b)²` given `k = k(X_a, X_b)`.
    pub fn first_order(a: usize, b: usize, k: T) -> Self {
        let h = T::lit(0.5);
        Self {
            support: vec![a, b],
            coeff: vec![h, -h * k, -h * k, h],
        }
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    /// `self − other` on the concatenated support.
    pub fn difference(&self, other: &Self) -> Self {
        let (p, q) = (self.dim(), other.dim());
        let m = p + q;
        let mut coeff = vec![T::zero(); m * m];
        for a in 0..p {
            for b in 0..p {
                coeff[a * m + b] = self.coeff[a * p + b];
            }
        }
        for a in 0..q {
            for b in 0..q {
                coeff[(p + a) * m + p + b] = -other.coeff[a * q + b];
            }
        }
        let mut support = self.support.clone();
        support.extend_from_slice(&other.support);
        Self { support, coeff }
    }

    /// `tr(C G)`.
    pub fn trace(&self, data: &KernelDataset<T>) -> T {
        let m = self.dim();
        let mut acc = T::zero();
        for a in 0..m {
            for b in 0..m {
                acc = acc + self.coeff[a * m + b] * data.k(self.support[b], self.support[a]);
            }
        }
        acc
    }

    /// `tr(A B) = tr(C_A G_AB C_B G_BA)`.
    pub fn trace_product(&self, other: &Self, data: &KernelDataset<T>) -> T {
        let (p, q) = (self.dim(), other.dim());
        // left = C_A G_AB  (p × q)
        let mut left = vec![T::zero(); p * q];
        for a in 0..p {
            for j in 0..q {
                let mut acc = T::zero();
                for b in 0..p {
                    acc = acc + self.coeff[a * p + b] * data.k(self.support[b], other.support[j]);
                }
                left[a * q + j] = acc;
            }
        }
        // right = C_B G_BA  (q × p)
        let mut right = vec![T::zero(); q * p];
        for j in 0..q {
            for a in 0..p {
                let mut acc = T::zero();
                for l in 0..q {
                    acc = acc + other.coeff[j * q + l] * data.k(other.support[l], self.support[a]);
                }
                right[j * p + a] = acc;
            }
        }
        let mut tr = T::zero();
        for a in 0..p {
            for j in 0..q {
                tr = tr + left[a * q + j] * right[j * p + a];
            }
        }
        tr
    }

    /// Eigenvalues of the represented operator on its span, via a
    /// semidefinite Cholesky factor of the support Gram.
    pub fn eigenvalues(&self, data: &KernelDataset<T>) -> Result<Vec<T>> {
        let m = self.dim();
        let l = semidefinite_cholesky(&data.support_gram(&self.support), m);
        // Lᵀ C L
        let mut cl = vec![T::zero(); m * m];
        for a in 0..m {
            for j in 0..m {
                let mut acc = T::zero();
                for b in 0..m {
                    acc = acc + self.coeff[a * m + b] * l[b * m + j];
                }
                cl[a * m + j] = acc;
            }
        }
        let mut s = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = T::zero();
                for a in 0..m {
                    acc = acc + l[a * m + i] * cl[a * m + j];
                }
                s[i * m + j] = acc;
            }
        }
        symmetric_eigenvalues(&s, m)
    }

    pub fn op_norm(&self, data: &KernelDataset<T>) -> Result<T> {
        let ev = self.eigenvalues(data)?;
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }
}

/// Lower-triangular `L` with `G = L Lᵀ` for PSD `G`; pivots that vanish to
/// rounding leave a zero column.
fn semidefinite_cholesky<T: Real>(g: &[T], m: usize) -> Vec<T> {
    let mut l = vec![T::zero(); m * m];
    let scale = (0..m).fold(T::zero(), |s, i| s.max(g[i * m + i].abs()));
    let tol = T::epsilon() * T::lit(64.0) * scale.max(T::min_positive_value());
    for j in 0..m {
        let mut pivot = g[j * m + j];
        for k in 0..j {
            pivot = pivot - l[j * m + k] * l[j * m + k];
        }
        if pivot <= tol {
            continue;
        }
        let root = pivot.sqrt();
        l[j * m + j] = root;
        for i in j + 1..m {
            let mut acc = g[i * m + j];
            for k in 0..j {
                acc = acc - l[i * m + k] * l[j * m + k];
            }
            l[i * m + j] = acc / root;
        }
    }
    l
}

/// `Z_i = tr(Y′_i) = 1 − k(X_{2i−1}, X_{2i})²`, with range bound `2B = 2`.
pub fn kernel_z<T: Real>(data: &KernelDataset<T>) -> Result<ScalarBatch<T>> {
    let half = data.n_used() / 2;
    let values = (0..half)
        .map(|i| {
            let k = data.k(2 * i, 2 * i + 1);
            T::one() - k * k
        })
        .collect();
    ScalarBatch::new(values, T::lit(2.0))
}

/// `Z′_j = tr(Y″_j) = ½ tr(D_j²)`, with range bound `4Bc² = 4`.
pub fn kernel_z_prime<T: Real>(data: &KernelDataset<T>) -> Result<ScalarBatch<T>> {
    let quarter = data.n_used() / 4;
    let values = (0..quarter)
        .map(|j| {
            let d = data.second_order_difference(j);
            T::lit(0.5) * d.trace_product(&d, data)
        })
        .collect();
    ScalarBatch::new(values, T::lit(4.0))
}

/// `‖Σ_n‖ = λ_max(M^{1/2} K M^{1/2})`.
pub fn kernel_sigma_norm<T: Real>(data: &KernelDataset<T>) -> Result<T> {
    let n = data.n_used();
    if n < 4 {
        return domain("kernel_sigma_norm needs at least 4 usable points");
    }
    let s = sqrt_m_gram_sqrt_m(data, n);
    let ev = symmetric_eigenvalues(&s, n)?;
    Ok(ev[n - 1].max(T::zero()))
}

/// Dense `M^{1/2} K M^{1/2}` over the first `n` points.
pub(crate) fn sqrt_m_gram_sqrt_m<T: Real>(data: &KernelDataset<T>, n: usize) -> Vec<T> {
    // M^{1/2} block for (1/n)[[1, -k], [-k, 1]] is [[p, q], [q, p]] with
    // p, q = (√(1-k) ± √(1+k)) / (2√n)
    let inv_root_n = T::one() / T::count(n).sqrt();
    let half = T::lit(0.5);
    let blocks: Vec<(T, T)> = (0..n / 2)
        .map(|i| {
            let k = data.k(2 * i, 2 * i + 1);
            let plus = (T::one() - k).max(T::zero()).sqrt();
            let minus = (T::one() + k).sqrt();
            ((plus + minus) * half * inv_root_n, (plus - minus) * half * inv_root_n)
        })
        .collect();
    // R = M^{1/2} K: row 2i = p K_{2i,·} + q K_{2i+1,·}, row 2i+1 = q K_{2i,·} + p K_{2i+1,·}
    let mut r = vec![T::zero(); n * n];
    for (i, &(p, q)) in blocks.iter().enumerate() {
        for j in 0..n {
            let (k0, k1) = (data.k(2 * i, j), data.k(2 * i + 1, j));
            r[2 * i * n + j] = p * k0 + q * k1;
            r[(2 * i + 1) * n + j] = q * k0 + p * k1;
        }
    }
    // S = R M^{1/2}: same combination applied to column pairs
    let mut s = vec![T::zero(); n * n];
    for row in 0..n {
        for (i, &(p, q)) in blocks.iter().enumerate() {
            let (r0, r1) = (r[row * n + 2 * i], r[row * n + 2 * i + 1]);
            s[row * n + 2 * i] = r0 * p + r1 * q;
            s[row * n + 2 * i + 1] = r0 * q + r1 * p;
        }
    }
    s
}
