//! Monte-Carlo reference value for the intrinsic dimension of the variance
//! operator of `φ(X) ⊗ φ(X)`.
//!
//! For a rank-one projector `Y = φ ⊗ φ` with `‖φ‖ = 1`, `Y² = Y`, so
//! `Var(Y) = C − C²` where `C = E[Y]` is the uncentered covariance operator.
//! `C` and `V` share eigenvectors, and the eigenvalues of `C` are estimated by
//! those of `K/N` on a large sample, giving `γ_j = λ_j(1 − λ_j)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::KernelDataset;
use crate::eigen::symmetric_eigenvalues;
use crate::error::{domain, BoundError, Result};
use crate::Real;

pub const DEFAULT_INPUT_DIM: usize = 10;
pub const MIN_MC_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputDistribution {
    /// Standard normal coordinates.
    Gaussian,
    /// Coordinates uniform on `[−1, 1]`.
    Uniform,
    /// Unit-rate exponential coordinates.
    Exponential,
    /// Every point at the origin.
    PointMass,
    /// Origin or `e₁`, each with probability one half.
    TwoPoint,
}

impl InputDistribution {
    pub const ALL: [InputDistribution; 5] = [
        InputDistribution::Gaussian,
        InputDistribution::Uniform,
        InputDistribution::Exponential,
        InputDistribution::PointMass,
        InputDistribution::TwoPoint,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            InputDistribution::Gaussian => "gaussian",
            InputDistribution::Uniform => "uniform",
            InputDistribution::Exponential => "exponential",
            InputDistribution::PointMass => "point-mass",
            InputDistribution::TwoPoint => "two-point",
        }
    }

    pub fn sample_point<T: Real, R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Vec<T> {
        match self {
            InputDistribution::Gaussian => (0..dim)
                .map(|_| T::lit(StandardNormal.sample(rng)))
                .collect(),
            InputDistribution::Uniform => (0..dim)
                .map(|_| T::lit(rng.random_range(-1.0..=1.0)))
                .collect(),
            InputDistribution::Exponential => (0..dim).map(|_| T::lit(Exp1.sample(rng))).collect(),
            InputDistribution::PointMass => vec![T::zero(); dim],
            InputDistribution::TwoPoint => {
                let mut x = vec![T::zero(); dim];
                if rng.random::<bool>() {
                    x[0] = T::one();
                }
                x
            }
        }
    }

    pub fn sample<T: Real, R: Rng + ?Sized>(&self, n: usize, dim: usize, rng: &mut R) -> Vec<Vec<T>> {
        (0..n).map(|_| self.sample_point(dim, rng)).collect()
    }
}

impl fmt::Display for InputDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for InputDistribution {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(InputDistribution::Gaussian),
            "uniform" => Ok(InputDistribution::Uniform),
            "exponential" => Ok(InputDistribution::Exponential),
            "point-mass" | "pointmass" | "point_mass" => Ok(InputDistribution::PointMass),
            "two-point" | "twopoint" | "two_point" => Ok(InputDistribution::TwoPoint),
            other => Err(BoundError::Domain(format!("unknown input distribution '{other}'"))),
        }
    }
}

/// Reference `tr(V)/‖V‖` with its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicOracle<T> {
    pub ratio: T,
    pub trace_v: T,
    pub norm_v: T,
    /// `V` vanished to rounding; the ratio is reported as 1.
    pub degenerate: bool,
}

/// Intrinsic-dimension reference in the default input dimension.
pub fn mc_intrinsic_oracle<T: Real>(
    dist: InputDistribution,
    gamma: T,
    mc_n: usize,
    seed: u64,
) -> Result<IntrinsicOracle<T>> {
    mc_intrinsic_oracle_in(dist, DEFAULT_INPUT_DIM, gamma, mc_n, seed)
}

pub fn mc_intrinsic_oracle_in<T: Real>(
    dist: InputDistribution,
    input_dim: usize,
    gamma: T,
    mc_n: usize,
    seed: u64,
) -> Result<IntrinsicOracle<T>> {
    if mc_n < MIN_MC_POINTS {
        return domain(format!("oracle needs at least {MIN_MC_POINTS} points, got {mc_n}"));
    }
    if input_dim == 0 {
        return domain("input dimension must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = dist.sample::<T, _>(mc_n, input_dim, &mut rng);
    let data = KernelDataset::new(points, gamma)?;
    let inv_n = T::one() / T::count(mc_n);
    let scaled: Vec<T> = data.gram().iter().map(|&k| k * inv_n).collect();
    let eig = symmetric_eigenvalues(&scaled, mc_n)?;
    let (mut trace_v, mut norm_v) = (T::zero(), T::zero());
    for lam in eig {
        let lam = lam.max(T::zero()).min(T::one());
        let g = lam * (T::one() - lam);
        trace_v = trace_v + g;
        norm_v = norm_v.max(g);
    }
    let floor = T::epsilon() * T::lit(100.0) * T::count(mc_n);
    if norm_v <= floor {
        return Ok(IntrinsicOracle {
            ratio: T::one(),
            trace_v,
            norm_v,
            degenerate: true,
        });
    }
    Ok(IntrinsicOracle {
        ratio: trace_v / norm_v,
        trace_v,
        norm_v,
        degenerate: false,
    })
}
