#![allow(dead_code)]

use opbound::{DiagonalBatch, SampleBatch, SymOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform on `[-1, 1]`, symmetrized.
pub fn random_symmetric(dim: usize, rng: &mut ChaCha8Rng) -> SymOperator<f64> {
    let mut e = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let x = rng.random_range(-1.0..1.0);
            e[i * dim + j] = x;
            e[j * dim + i] = x;
        }
    }
    SymOperator::from_row_major(dim, e).unwrap()
}

/// Random orthogonal matrix (row-major) by Gram-Schmidt on a uniform matrix.
pub fn random_rotation(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        for u in &q {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            q.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    q.into_iter().flatten().collect()
}

/// `Q diag(v) Qᵀ`.
pub fn rotate_diagonal(q: &[f64], v: &[f64]) -> SymOperator<f64> {
    let d = v.len();
    let mut e = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            e[i * d + j] = (0..d).map(|k| q[i * d + k] * v[k] * q[j * d + k]).sum();
        }
    }
    SymOperator::from_row_major(d, e).unwrap()
}

/// `n × d` coordinates with column `i` uniform on `[0, a_i]`.
pub fn uniform_coords(a: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * a.len());
    for _ in 0..n {
        for &ai in a {
            out.push(ai * rng.random::<f64>());
        }
    }
    out
}

pub fn uniform_diagonal(a: &[f64], n: usize, rng: &mut ChaCha8Rng) -> DiagonalBatch<f64> {
    let d = a.len();
    DiagonalBatch::new(uniform_coords(a, n, rng), d, 1.0, d as f64, true).unwrap()
}

/// Dense batch `Q diag(u) Qᵀ` with `u_i ~ U[0, a_i]` and a fixed rotation.
pub fn rotated_uniform_batch(a: &[f64], q: &[f64], n: usize, rng: &mut ChaCha8Rng) -> SampleBatch<f64> {
    let d = a.len();
    let coords = uniform_coords(a, n, rng);
    let items = coords.chunks_exact(d).map(|row| rotate_diagonal(q, row)).collect();
    SampleBatch::new(items, 1.0, d as f64, true).unwrap()
}

pub fn polynomial_profile(d: usize) -> Vec<f64> {
    (1..=d).map(|i| 1.0 / (i * i) as f64).collect()
}

/// Variance diagonal `a_i²/12` of `U[0, a_i]` coordinates.
pub fn uniform_variance(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| x * x / 12.0).collect()
}

/// `E[(X′ − Σ)²]` diagonal for uniform coordinates: `Var(½(u − v)²) = 7a⁴/720`.
pub fn uniform_var_xprime(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| 7.0 * x.powi(4) / 720.0).collect()
}
