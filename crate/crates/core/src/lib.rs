//! Empirical Bennett and Bernstein concentration bounds for sums of bounded
//! symmetric operators, with dimension dependence through an estimated
//! intrinsic dimension `tr(Σ)/‖Σ‖` of the variance.
//!
//! The pipeline is: a [`SampleBatch`] (or [`DiagonalBatch`], or
//! [`KernelDataset`]) is paired into auxiliary sequences, summarized as
//! [`PairedStats`], turned into [`VarianceProxies`], and finally into a
//! confidence radius for `‖S_n/n − μ‖`.
//!
//! Everything is generic over [`Real`] (`f32`, `f64`); aliases for both are
//! provided below.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod bounds;
pub mod diagonal;
pub mod eigen;
pub mod empirical;
pub mod error;
pub mod kernel;
pub mod pairing;
pub mod rate;
pub mod scalar;
pub mod spectral;
pub mod variance;

pub use batch::SampleBatch;
pub use bounds::{
    ambient_bernstein_radius, asymptotic_k, delta_schedule, empirical_bennett_from_stats,
    empirical_bennett_radius, empirical_bernstein_from_stats, empirical_bernstein_radius,
    intrinsic_dim_from_stats, intrinsic_dim_interval, oracle_bennett_tail, oracle_bernstein_radius,
    sharpness_limit, BoundReport, DeltaPartition, Interval, Method,
};
pub use diagonal::DiagonalBatch;
pub use eigen::symmetric_eigenvalues;
pub use empirical::{mp_margin, pair_variance, ScalarBatch};
pub use error::{BoundError, Result};
pub use kernel::{
    kernel_sigma_norm, kernel_z, kernel_z_prime, mc_intrinsic_oracle, mc_intrinsic_oracle_in, rbf_kernel,
    InputDistribution, IntrinsicOracle, KernelDataset, SpanOperator,
};
pub use pairing::{build_first_order, build_second_order, half_squared_difference, PairedSequences, PairedStats};
pub use rate::{
    bennett_h, bernstein_inverse, gamma_margin, h_inv_upper, pi_bernstein_radius, pi_inverse, pi_tail, psi_pc,
    TailParams,
};
pub use scalar::Real;
pub use spectral::{mean_operator, SymOperator};
pub use variance::{
    empirical_sigma, sigma_lower_sq, sigma_lower_sq_at, sigma_upper_sq, sigma_upper_sq_at, tau_lower, tau_upper,
    tau_upper_prime, NormProxy, VarianceProxies,
};

pub type SymOperatorF64 = SymOperator<f64>;
pub type SymOperatorF32 = SymOperator<f32>;
pub type SampleBatchF64 = SampleBatch<f64>;
pub type SampleBatchF32 = SampleBatch<f32>;
pub type DiagonalBatchF64 = DiagonalBatch<f64>;
pub type DiagonalBatchF32 = DiagonalBatch<f32>;
pub type ScalarBatchF64 = ScalarBatch<f64>;
pub type ScalarBatchF32 = ScalarBatch<f32>;
pub type KernelDatasetF64 = KernelDataset<f64>;
pub type KernelDatasetF32 = KernelDataset<f32>;
pub type PairedStatsF64 = PairedStats<f64>;
pub type BoundReportF64 = BoundReport<f64>;
pub type BoundReportF32 = BoundReport<f32>;
