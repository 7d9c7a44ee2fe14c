//! Experiment configuration, optionally loaded from a TOML file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use opbound::InputDistribution;
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const DEFAULT_COVARIANCE_GRID: [usize; 3] = [10_000, 30_000, 100_000];
pub const FULL_COVARIANCE_GRID: [usize; 5] = [10_000, 30_000, 100_000, 300_000, 1_000_000];
pub const DEFAULT_KERNEL_GRID: [usize; 3] = [256, 512, 1024];
pub const DEFAULT_TRIALS: usize = 20;
pub const FULL_TRIALS: usize = 50;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_DIM: usize = 3;
pub const DEFAULT_MC_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Covariance,
    Kernel,
}

impl ExperimentKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ExperimentKind::Covariance => "covariance",
            ExperimentKind::Kernel => "kernel",
        }
    }
}

/// Spectral profile of the covariance study: coordinate `i` is `U[0, a_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// `a_i = 1`.
    Isotropic,
    /// `a_1 = 1`, `a_i = 0` otherwise.
    Anisotropic,
    /// `a_i = i⁻²`.
    Polynomial,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Isotropic, Profile::Anisotropic, Profile::Polynomial];

    pub fn tag(&self) -> &'static str {
        match self {
            Profile::Isotropic => "isotropic",
            Profile::Anisotropic => "anisotropic",
            Profile::Polynomial => "polynomial",
        }
    }

    pub fn amplitudes(&self, d: usize) -> Vec<f64> {
        (1..=d)
            .map(|i| match self {
                Profile::Isotropic => 1.0,
                Profile::Anisotropic => {
                    if i == 1 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Profile::Polynomial => 1.0 / (i * i) as f64,
            })
            .collect()
    }

    /// Diagonal of the covariance of one observation, `a_i²/12`.
    pub fn variance(&self, d: usize) -> Vec<f64> {
        self.amplitudes(d).iter().map(|a| a * a / 12.0).collect()
    }

    /// `(tr Σ, ‖Σ‖)`.
    pub fn variance_moments(&self, d: usize) -> (f64, f64) {
        let v = self.variance(d);
        (v.iter().sum(), v.iter().fold(0.0, |m: f64, &x| m.max(x)))
    }

    /// Coordinates of `E[X]`, `a_i/2`.
    pub fn mean(&self, d: usize) -> Vec<f64> {
        self.amplitudes(d).iter().map(|a| a / 2.0).collect()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Profile {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "isotropic" => Ok(Profile::Isotropic),
            "anisotropic" => Ok(Profile::Anisotropic),
            "polynomial" => Ok(Profile::Polynomial),
            other => Err(HarnessError::Bound(opbound::BoundError::Domain(format!(
                "unknown profile '{other}'"
            )))),
        }
    }
}

/// What a single configuration samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Workload {
    Covariance(Profile),
    Kernel(InputDistribution),
}

impl Workload {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Workload::Covariance(_) => ExperimentKind::Covariance,
            Workload::Kernel(_) => ExperimentKind::Kernel,
        }
    }

    pub fn target_tag(&self) -> &'static str {
        match self {
            Workload::Covariance(p) => p.tag(),
            Workload::Kernel(d) => d.tag(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub workload: Workload,
    /// Matrix dimension (covariance).
    pub d: usize,
    pub n_grid: Vec<usize>,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    /// RBF width (kernel).
    pub gamma: f64,
    pub psd_bounded: bool,
    /// Input dimension of the kernel points.
    pub input_dim: usize,
    /// Sample size of the Monte-Carlo intrinsic-dimension reference.
    pub mc_n: usize,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn covariance(profile: Profile) -> Self {
        Self {
            workload: Workload::Covariance(profile),
            d: DEFAULT_DIM,
            n_grid: DEFAULT_COVARIANCE_GRID.to_vec(),
            delta: DEFAULT_DELTA,
            trials: DEFAULT_TRIALS,
            seed: 0,
            gamma: DEFAULT_GAMMA,
            psd_bounded: true,
            input_dim: opbound::kernel::DEFAULT_INPUT_DIM,
            mc_n: DEFAULT_MC_POINTS,
            output_path: None,
        }
    }

    pub fn kernel(distribution: InputDistribution) -> Self {
        Self {
            workload: Workload::Kernel(distribution),
            n_grid: DEFAULT_KERNEL_GRID.to_vec(),
            ..Self::covariance(Profile::Isotropic)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if let Some(n) = self.n_grid.iter().find(|&&n| n < 8) {
            return bad(format!("n_grid entries must be >= 8, got {n}"));
        }
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.d == 0 {
            return bad("d must be >= 1".into());
        }
        if let Workload::Kernel(_) = self.workload {
            if !(self.gamma > 0.0 && self.gamma.is_finite()) {
                return bad(format!("gamma must be positive, got {}", self.gamma));
            }
            if self.input_dim == 0 {
                return bad("input_dim must be >= 1".into());
            }
        }
        Ok(())
    }
}

/// Mirror of the command-line flags; every field is optional.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub profile: Option<String>,
    pub distribution: Option<String>,
    pub d: Option<usize>,
    pub n_grid: Option<Vec<usize>>,
    pub delta: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub out: Option<PathBuf>,
    pub full: Option<bool>,
    pub psd_bounded: Option<bool>,
    pub input_dim: Option<usize>,
    pub mc_n: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::Config(message) => HarnessError::Format {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: FileConfig) -> FileConfig {
        FileConfig {
            profile: over.profile.or(self.profile),
            distribution: over.distribution.or(self.distribution),
            d: over.d.or(self.d),
            n_grid: over.n_grid.or(self.n_grid),
            delta: over.delta.or(self.delta),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            gamma: over.gamma.or(self.gamma),
            out: over.out.or(self.out),
            full: over.full.or(self.full),
            psd_bounded: over.psd_bounded.or(self.psd_bounded),
            input_dim: over.input_dim.or(self.input_dim),
            mc_n: over.mc_n.or(self.mc_n),
        }
    }

    /// Expands into one configuration per target. A missing profile or
    /// distribution selects every target of the experiment.
    pub fn resolve(&self, kind: ExperimentKind) -> Result<Vec<ExperimentConfig>> {
        let full = self.full.unwrap_or(false);
        let workloads: Vec<Workload> = match kind {
            ExperimentKind::Covariance => match &self.profile {
                Some(p) => vec![Workload::Covariance(p.parse()?)],
                None => Profile::ALL.iter().map(|&p| Workload::Covariance(p)).collect(),
            },
            ExperimentKind::Kernel => match &self.distribution {
                Some(d) => vec![Workload::Kernel(d.parse()?)],
                None => [
                    InputDistribution::Gaussian,
                    InputDistribution::Uniform,
                    InputDistribution::Exponential,
                ]
                .iter()
                .map(|&d| Workload::Kernel(d))
                .collect(),
            },
        };
        workloads
            .into_iter()
            .map(|workload| {
                let mut cfg = match workload {
                    Workload::Covariance(p) => ExperimentConfig::covariance(p),
                    Workload::Kernel(d) => ExperimentConfig::kernel(d),
                };
                if full {
                    cfg.trials = FULL_TRIALS;
                    if kind == ExperimentKind::Covariance {
                        cfg.n_grid = FULL_COVARIANCE_GRID.to_vec();
                    }
                }
                if let Some(v) = self.d {
                    cfg.d = v;
                }
                if let Some(v) = &self.n_grid {
                    cfg.n_grid = v.clone();
                }
                if let Some(v) = self.delta {
                    cfg.delta = v;
                }
                if let Some(v) = self.trials {
                    cfg.trials = v;
                }
                if let Some(v) = self.seed {
                    cfg.seed = v;
                }
                if let Some(v) = self.gamma {
                    cfg.gamma = v;
                }
                if let Some(v) = self.psd_bounded {
                    cfg.psd_bounded = v;
                }
                if let Some(v) = self.input_dim {
                    cfg.input_dim = v;
                }
                if let Some(v) = self.mc_n {
                    cfg.mc_n = v;
                }
                cfg.output_path = self.out.clone();
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_amplitudes() {
        assert_eq!(Profile::Anisotropic.amplitudes(3), vec![1.0, 0.0, 0.0]);
        assert_eq!(Profile::Polynomial.amplitudes(3), vec![1.0, 0.25, 1.0 / 9.0]);
        assert_eq!(Profile::Isotropic.variance_moments(3), (0.25, 1.0 / 12.0));
        assert!("spiky".parse::<Profile>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse("seed = 4\ntrials = 7\nn-grid = [16, 32]\nprofile = \"polynomial\"").unwrap();
        let flags = FileConfig {
            trials: Some(3),
            ..Default::default()
        };
        let cfgs = file.merge(flags).resolve(ExperimentKind::Covariance).unwrap();
        assert_eq!(cfgs.len(), 1);
        assert_eq!(cfgs[0].trials, 3);
        assert_eq!(cfgs[0].seed, 4);
        assert_eq!(cfgs[0].n_grid, vec![16, 32]);
        assert_eq!(cfgs[0].workload, Workload::Covariance(Profile::Polynomial));
    }

    #[test]
    fn full_flag_and_defaults() {
        let full = FileConfig {
            full: Some(true),
            ..Default::default()
        };
        let cfgs = full.resolve(ExperimentKind::Covariance).unwrap();
        assert_eq!(cfgs.len(), 3);
        assert_eq!(cfgs[0].n_grid, FULL_COVARIANCE_GRID.to_vec());
        assert_eq!(cfgs[0].trials, 50);
        let kernel = FileConfig::default().resolve(ExperimentKind::Kernel).unwrap();
        assert_eq!(kernel.len(), 3);
        assert_eq!(kernel[0].n_grid, DEFAULT_KERNEL_GRID.to_vec());
        assert_eq!(kernel[0].gamma, 0.1);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let small = FileConfig {
            n_grid: Some(vec![4]),
            ..Default::default()
        };
        assert!(small.resolve(ExperimentKind::Covariance).is_err());
        let delta = FileConfig {
            delta: Some(1.0),
            ..Default::default()
        };
        assert!(delta.resolve(ExperimentKind::Kernel).is_err());
        assert!(FileConfig::parse("bogus = 1").is_err());
    }
}
