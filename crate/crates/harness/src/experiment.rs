//! Trial loops for both studies.

use opbound::{
    ambient_bernstein_radius, delta_schedule, empirical_bernstein_from_stats, intrinsic_dim_from_stats,
    mc_intrinsic_oracle_in, oracle_bernstein_radius, BoundReport, InputDistribution, IntrinsicOracle,
    KernelDataset, PairedStats,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind, Profile, Workload};
use crate::error::{HarnessError, Result};
use crate::record::TrialRecord;
use crate::sampling::{sample_diagonal_batch, trial_seed};

/// Salt separating the reference-oracle stream from the trial streams.
const ORACLE_STREAM: u64 = 0x6f72_6163_6c65_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    /// `‖S_n/n − μ‖` when the mean is known (covariance study only).
    pub deviation: Option<f64>,
}

impl TrialOutcome {
    pub fn covered(&self) -> Option<bool> {
        self.deviation.map(|d| d <= self.record.oeb_radius)
    }
}

struct Summary {
    oeb: f64,
    tau_u: f64,
    sigma_u_sq: f64,
    lower: f64,
    upper: f64,
}

fn summarize(stats: &PairedStats<f64>, cfg: &ExperimentConfig, n: usize) -> Result<(Summary, BoundReport<f64>)> {
    let part = delta_schedule(n, cfg.delta)?;
    let rep = empirical_bernstein_from_stats(stats, part)?;
    let ci = intrinsic_dim_from_stats(stats, part.delta2, part.delta3)?;
    let proxies = rep.proxies.as_ref().expect("empirical reports carry proxies");
    let iv = ci.interval.expect("interval report");
    Ok((
        Summary {
            oeb: rep.radius,
            tau_u: proxies.tau_u,
            sigma_u_sq: proxies.sigma_u_sq,
            lower: iv.lower,
            upper: iv.upper,
        },
        rep,
    ))
}

fn record(
    cfg: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed_used: u64,
    s: &Summary,
    oracle: f64,
    ambient: f64,
) -> TrialRecord {
    TrialRecord {
        experiment: cfg.workload.kind().tag().to_string(),
        profile: cfg.workload.target_tag().to_string(),
        n,
        trial_index: trial,
        seed_used,
        oeb_radius: s.oeb,
        intrinsic_oracle_radius: oracle,
        ambient_oracle_radius: ambient,
        ratio_oeb: s.oeb / oracle,
        ratio_ambient: ambient / oracle,
        tau_u: s.tau_u,
        sigma_u_sq: s.sigma_u_sq,
        intrinsic_dim_lower: s.lower,
        intrinsic_dim_upper: s.upper,
    }
}

/// One covariance trial on the diagonal fast path. Observations beyond the
/// largest multiple of four are drawn but not used.
pub fn covariance_trial(cfg: &ExperimentConfig, profile: Profile, n: usize, trial: usize) -> Result<TrialOutcome> {
    let seed_used = trial_seed(cfg.seed, n, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_used);
    let d = cfg.d;
    let drawn = sample_diagonal_batch(profile, d, n, cfg.psd_bounded, &mut rng)?;
    let n_used = n / 4 * 4;
    let mut coords = Vec::with_capacity(n_used * d);
    for i in 0..n_used {
        coords.extend_from_slice(drawn.row(i));
    }
    let batch = opbound::DiagonalBatch::new(coords, d, drawn.c(), drawn.b(), drawn.psd_bounded())?;
    let stats = batch.stats()?;
    let (summary, rep) = summarize(&stats, cfg, n_used)?;

    let (trace, norm) = profile.variance_moments(d);
    let oracle = oracle_bernstein_radius(trace, norm, rep.c_eff, n_used, cfg.delta)?;
    let ambient = ambient_bernstein_radius(norm, rep.c_eff, n_used, cfg.delta, d)?;
    let mu = profile.mean(d);
    let deviation = batch
        .mean()
        .iter()
        .zip(&mu)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(TrialOutcome {
        record: record(cfg, n, trial, seed_used, &summary, oracle, ambient),
        deviation: Some(deviation),
    })
}

/// Reference intrinsic dimension for a kernel configuration.
pub fn kernel_oracle(cfg: &ExperimentConfig, dist: InputDistribution) -> Result<IntrinsicOracle<f64>> {
    let oracle = mc_intrinsic_oracle_in(dist, cfg.input_dim, cfg.gamma, cfg.mc_n, cfg.seed ^ ORACLE_STREAM)?;
    if oracle.degenerate {
        return Err(HarnessError::Config(format!(
            "variance of the {dist} feature projector vanishes; no oracle radius exists"
        )));
    }
    Ok(oracle)
}

/// One kernel trial. The ambient radius is infinite in feature space.
pub fn kernel_trial(
    cfg: &ExperimentConfig,
    dist: InputDistribution,
    oracle: &IntrinsicOracle<f64>,
    n: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let seed_used = trial_seed(cfg.seed, n, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_used);
    let points = dist.sample(n / 4 * 4, cfg.input_dim, &mut rng);
    let data = KernelDataset::new(points, cfg.gamma)?;
    let stats = data.paired_stats()?;
    let (summary, rep) = summarize(&stats, cfg, stats.n_used)?;
    let radius = oracle_bernstein_radius(oracle.trace_v, oracle.norm_v, rep.c_eff, stats.n_used, cfg.delta)?;
    Ok(TrialOutcome {
        record: record(cfg, n, trial, seed_used, &summary, radius, f64::INFINITY),
        deviation: None,
    })
}

/// Runs every `(n, trial)` cell, handing each grid point's outcomes to `sink`
/// in trial order. On failure, the trials that succeeded before the first
/// failing one are still delivered.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    sink: &mut dyn FnMut(&[TrialOutcome]) -> Result<()>,
) -> Result<()> {
    cfg.validate()?;
    let oracle = match cfg.workload {
        Workload::Kernel(dist) => Some(kernel_oracle(cfg, dist)?),
        Workload::Covariance(_) => None,
    };
    for &n in &cfg.n_grid {
        let results: Vec<Result<TrialOutcome>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| match cfg.workload {
                Workload::Covariance(p) => covariance_trial(cfg, p, n, t),
                Workload::Kernel(d) => kernel_trial(cfg, d, oracle.as_ref().expect("kernel oracle"), n, t),
            })
            .collect();
        let mut done = Vec::with_capacity(results.len());
        let mut failure = None;
        for r in results {
            match r {
                Ok(o) => done.push(o),
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        sink(&done)?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialOutcome>> {
    let mut all = Vec::new();
    run_experiment_with(cfg, &mut |batch| {
        all.extend_from_slice(batch);
        Ok(())
    })?;
    Ok(all)
}

fn run_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<Vec<TrialRecord>> {
    if cfg.workload.kind() != kind {
        return Err(HarnessError::Config(format!(
            "expected a {} configuration",
            kind.tag()
        )));
    }
    Ok(run_experiment(cfg)?.into_iter().map(|o| o.record).collect())
}

pub fn run_covariance_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_kind(cfg, ExperimentKind::Covariance)
}

pub fn run_kernel_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_kind(cfg, ExperimentKind::Kernel)
}
