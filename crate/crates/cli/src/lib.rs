//! Command-line driver for the `rao_fusion` simulator.
//!
//! Every experiment command reads an optional TOML config, applies
//! `--set section.key=value` overrides and writes a CSV table, the resolved
//! config and a JSON summary into the output directory.
//!
//! Exit codes: 0 success, 1 runtime failure (or a failed `validate` check),
//! 2 unparsable arguments or config, 3 invalid experiment.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rao_fusion::NoiseFamily;

use crate::commands::QuantizerArgs;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::RunOutput;

#[derive(Debug, Parser)]
#[command(
    name = "rao-fusion",
    version,
    about = "One-bit WSN target detection: GLR and generalized Rao fusion experiments"
)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// TOML experiment config; omitted keys take their defaults.
    #[arg(long, short)]
    pub config: Option<PathBuf>,

    /// Override one config key, e.g. `--set montecarlo.trials_h0=1000`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, default_value = "gaussian", value_parser = parse_family)]
    pub family: NoiseFamily,

    /// Bit-error probability of the channel.
    #[arg(long, default_value_t = 0.0)]
    pub pe: f64,

    /// Noise scale; unit variance when omitted.
    #[arg(long)]
    pub scale: Option<f64>,

    /// Generalized Gaussian exponent.
    #[arg(long)]
    pub shape: Option<f64>,

    /// Search interval bounds (default ±5 scale).
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Points of the objective curve written to CSV.
    #[arg(long, default_value_t = 401)]
    pub points: usize,

    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal quantizer threshold for one sensor.
    DesignQuantizer(DesignArgs),
    /// Null-hypothesis thresholds, checked on a fresh sample.
    Calibrate(ExperimentArgs),
    /// Detection probability against a common threshold τ.
    SweepTau(ExperimentArgs),
    /// Detection probability against SNR.
    SweepSnr(ExperimentArgs),
    /// Detection probability with the target pinned to lattice cells.
    Heatmap(ExperimentArgs),
    /// Empirical ROC curve.
    Roc(ExperimentArgs),
    /// Clairvoyant asymptotic detection probability.
    Predict(ExperimentArgs),
    /// Exact-enumeration self checks.
    Validate(ExperimentArgs),
}

fn parse_family(s: &str) -> Result<NoiseFamily, String> {
    s.parse().map_err(|e: rao_fusion::Error| e.to_string())
}

impl ExperimentArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::load(self.config.as_deref(), &self.overrides)?;
        if let Some(dir) = &self.out {
            cfg.output.dir = dir.clone();
        }
        Ok(cfg)
    }
}

type ExperimentFn = fn(&ExperimentConfig, &mut RunOutput) -> Result<serde_json::Value, CliError>;

fn run_experiment(name: &'static str, args: &ExperimentArgs, f: ExperimentFn) -> Result<bool, CliError> {
    let cfg = args.load()?;
    let mut out = RunOutput::create(&cfg.output.dir, name)?;
    let results = f(&cfg, &mut out)?;
    let summary = out.finish(Some(&cfg), results)?;
    eprintln!("wrote {}", summary.display());
    Ok(true)
}

/// Run a parsed command line; `Ok(false)` signals failed checks.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::validation("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::runtime(e.to_string()))?;
    }
    match &cli.command {
        Command::DesignQuantizer(a) => {
            let mut out = RunOutput::create(&a.out, "design_quantizer")?;
            let results = commands::design_quantizer(
                &QuantizerArgs {
                    family: a.family,
                    pe: a.pe,
                    scale: a.scale,
                    shape: a.shape,
                    lo: a.lo,
                    hi: a.hi,
                    tol: a.tol,
                    points: a.points,
                },
                &mut out,
            )?;
            out.finish(None, results)?;
            Ok(true)
        }
        Command::Calibrate(a) => run_experiment("calibrate", a, commands::calibrate),
        Command::SweepTau(a) => run_experiment("sweep_tau", a, commands::sweep_tau_cmd),
        Command::SweepSnr(a) => run_experiment("sweep_snr", a, commands::sweep_snr_cmd),
        Command::Heatmap(a) => run_experiment("heatmap", a, commands::heatmap),
        Command::Roc(a) => run_experiment("roc", a, commands::roc),
        Command::Predict(a) => run_experiment("predict", a, commands::predict),
        Command::Validate(a) => {
            let cfg = a.load()?;
            let mut out = RunOutput::create(&cfg.output.dir, "validate")?;
            let (results, passed) = commands::validate(&cfg, &mut out)?;
            out.finish(Some(&cfg), results)?;
            Ok(passed)
        }
    }
}

/// Parse arguments, run, and map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
