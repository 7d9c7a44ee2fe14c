use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use opbound_harness::{run_experiment_with, CsvSink, ExperimentKind, FileConfig, HarnessError, TrialOutcome};

#[derive(Parser)]
#[command(name = "opbound", version, about = "Intrinsic-dimension concentration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commuting d x d covariance study with uniform eigenvalues.
    Covariance(Flags),
    /// Kernel covariance study in an RBF feature space.
    Kernel(Flags),
}

#[derive(Args)]
struct Flags {
    /// Spectral profile: isotropic, anisotropic or polynomial (all if omitted).
    #[arg(long)]
    profile: Option<String>,
    /// Input distribution: gaussian, uniform or exponential (all if omitted).
    #[arg(long)]
    distribution: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// RBF width.
    #[arg(long)]
    gamma: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full grid and trial count.
    #[arg(long, action = ArgAction::SetTrue)]
    full: bool,
    /// Treat observations as PSD, which halves the centered bound.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    psd_bounded: Option<bool>,
    /// Input dimension of kernel points.
    #[arg(long)]
    input_dim: Option<usize>,
    /// Sample size of the reference intrinsic-dimension estimate.
    #[arg(long)]
    mc_n: Option<usize>,
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn to_file_config(&self) -> FileConfig {
        FileConfig {
            profile: self.profile.clone(),
            distribution: self.distribution.clone(),
            d: self.d,
            n_grid: self.n_grid.clone(),
            delta: self.delta,
            trials: self.trials,
            seed: self.seed,
            gamma: self.gamma,
            out: self.out.clone(),
            full: self.full.then_some(true),
            psd_bounded: self.psd_bounded,
            input_dim: self.input_dim,
            mc_n: self.mc_n,
        }
    }
}

fn run(kind: ExperimentKind, flags: &Flags) -> Result<(), HarnessError> {
    let base = match &flags.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let merged = base.merge(flags.to_file_config());
    let configs = merged.resolve(kind)?;
    let out = merged
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", kind.tag())));
    let mut sink = CsvSink::create(&out)?;
    for cfg in &configs {
        run_experiment_with(cfg, &mut |batch: &[TrialOutcome]| {
            let records: Vec<_> = batch.iter().map(|o| o.record.clone()).collect();
            sink.write(&records)?;
            if let Some(first) = records.first() {
                let mean = records.iter().map(|r| r.ratio_oeb).sum::<f64>() / records.len() as f64;
                eprintln!(
                    "{} {} n={} trials={} mean ratio_oeb={mean:.4}",
                    first.experiment,
                    first.profile,
                    first.n,
                    records.len()
                );
            }
            Ok(())
        })?;
    }
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match &cli.command {
        Command::Covariance(f) => (ExperimentKind::Covariance, f),
        Command::Kernel(f) => (ExperimentKind::Kernel, f),
    };
    match run(kind, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
