//! Command-line front end: estimate a spectral density from CSV
//! observations, factorize it, and report Wiener-Granger causality indices
//! as machine-readable JSON.
//!
//! Exit codes: 0 success, 2 input/configuration error, 3 numerical failure
//! (Paley-Wiener violation or factorization non-convergence).

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specgc_core::causality::{
    analyze_grouping, significance_flag, CausalityReport, GroupSpec, GroupingResult, IndexEntry,
    REPORT_SCHEMA_VERSION,
};
use specgc_core::error::Error as CoreError;
use specgc_core::estimation::estimate_psd;
use specgc_core::grid::FrequencyGrid;
use specgc_core::matrix_factor::matrix_factorize;
use specgc_core::oracle::simulate_var;
use specgc_core::psd::SpectralDensityMatrix;
use specgc_core::series::MultichannelSeries;
use specgc_core::var::VarModel;

mod config;
mod csvio;
mod fixtures;

use config::AnalysisConfig;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable/malformed input or configuration; exit code 2.
    Input(String),
    /// The numbers said no; exit code 3.
    Numerical(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e.root() {
            CoreError::NotFactorizable { .. }
            | CoreError::NonConvergence { .. }
            | CoreError::SingularMatrix { .. }
            | CoreError::NotPositiveDefinite { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "specgc",
    version,
    about = "Wiener-Granger causality between time series via spectral factorization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: estimate, factorize, predict, report causality
    Analyze(AnalyzeArgs),
    /// Run the built-in spectral-vs-oracle cross-validation suite
    Verify(VerifyArgs),
    /// Estimate and emit the spectral density matrix only
    Psd(StageArgs),
    /// Estimate, factorize, and emit the factor coefficients only
    Factorize(StageArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input CSV: header row of channel names, one sample per row
    #[arg(long)]
    input: Option<PathBuf>,
    /// Configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Frequency grid size (power of two), overriding the config
    #[arg(long)]
    grid_size: Option<usize>,
    /// Significance threshold on the log index, overriding the config
    #[arg(long)]
    threshold: Option<f64>,
    /// Analyze a freshly generated fixture series with this seed instead
    /// of reading --input
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only fixtures whose name contains this substring
    #[arg(long)]
    fixtures: Option<String>,
    /// Relative tolerance for spectral-vs-oracle agreement
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct StageArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    grid_size: Option<usize>,
    /// Generate the built-in fixture series with this seed instead of
    /// reading --input
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Verify(args) => run_verify(args),
        Command::Psd(args) => run_psd(args),
        Command::Factorize(args) => run_factorize(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<AnalysisConfig, CliError> {
    match path {
        None => Ok(AnalysisConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display())))?;
            AnalysisConfig::parse(&text)
        }
    }
}

/// The coupled two-channel model used whenever a fixture series is
/// requested with --seed.
fn fixture_model() -> VarModel {
    VarModel::new(
        vec![vec![vec![0.5, 0.4], vec![0.0, 0.7]]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .expect("fixture model is stable")
}

fn load_series(
    input: Option<&Path>,
    seed: Option<u64>,
    cfg: &AnalysisConfig,
) -> Result<MultichannelSeries, CliError> {
    match (input, seed) {
        (Some(path), _) => csvio::read_series(path, cfg.sample_interval),
        (None, Some(seed)) => Ok(simulate_var(&fixture_model(), cfg.fixture_length, seed)?),
        (None, None) => Err(CliError::input(
            "no input: pass --input <csv> or --seed <n> for a generated fixture",
        )),
    }
}

fn estimate(
    series: &MultichannelSeries,
    cfg: &AnalysisConfig,
) -> Result<SpectralDensityMatrix, CliError> {
    let grid = FrequencyGrid::new(cfg.grid_size)?;
    Ok(estimate_psd(series, &cfg.estimator, &grid)?)
}

/// Group spec plus the source/target names it was resolved from.
type ResolvedGrouping = (GroupSpec, Vec<String>, Vec<String>);

fn resolve_groupings(
    series: &MultichannelSeries,
    cfg: &AnalysisConfig,
) -> Result<Vec<ResolvedGrouping>, CliError> {
    let mut resolved = Vec::new();
    if cfg.groupings.is_empty() {
        if series.dim() == 2 {
            // both directions by default for a channel pair
            let names = series.channel_names();
            resolved.push((
                GroupSpec::new(vec![1], vec![0])?,
                vec![names[1].clone()],
                vec![names[0].clone()],
            ));
            resolved.push((
                GroupSpec::new(vec![0], vec![1])?,
                vec![names[0].clone()],
                vec![names[1].clone()],
            ));
            return Ok(resolved);
        }
        return Err(CliError::input(
            "no [grouping] sections configured and the input is not a channel pair",
        ));
    }
    for (src_names, tgt_names) in &cfg.groupings {
        let lookup = |names: &[String]| -> Result<Vec<usize>, CliError> {
            names
                .iter()
                .map(|n| {
                    series.channel_index(n).ok_or_else(|| {
                        CliError::input(format!("unknown channel '{n}' in grouping"))
                    })
                })
                .collect()
        };
        let spec = GroupSpec::new(lookup(src_names)?, lookup(tgt_names)?)?;
        resolved.push((spec, src_names.clone(), tgt_names.clone()));
    }
    Ok(resolved)
}

fn run_analyze(args: AnalyzeArgs) -> Result<ExitCode, CliError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(k) = args.grid_size {
        cfg.grid_size = k;
    }
    if let Some(t) = args.threshold {
        cfg.threshold = t;
    }
    let series = load_series(args.input.as_deref(), args.seed, &cfg)?;
    let psd = estimate(&series, &cfg)?;
    let groupings = resolve_groupings(&series, &cfg)?;

    let mut results = Vec::new();
    for (spec, src_names, tgt_names) in &groupings {
        let analysis = analyze_grouping(&psd, spec, &cfg.lags, &cfg.factorization)?;
        let indices = analysis
            .indices
            .iter()
            .map(|idx| IndexEntry {
                lag: idx.lag,
                e_restricted: idx.e_restricted,
                e_full: idx.e_full,
                ratio: idx.ratio,
                log_index: idx.log_index,
                significant: significance_flag(idx, cfg.threshold),
            })
            .collect();
        results.push(GroupingResult {
            source: src_names.clone(),
            target: tgt_names.clone(),
            joint_factor_residual: analysis.joint_factor.residual(),
            marginal_factor_residual: analysis.marginal_factor.residual(),
            joint_truncation_flagged: analysis.joint_factor.truncation_flagged(),
            marginal_truncation_flagged: analysis.marginal_factor.truncation_flagged(),
            indices,
        });
    }

    let report = CausalityReport {
        schema_version: REPORT_SCHEMA_VERSION,
        channel_names: series.channel_names().to_vec(),
        grid_size: cfg.grid_size,
        estimator: cfg.estimator,
        factorization: cfg.factorization,
        significance_threshold: cfg.threshold,
        groupings: results,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::input(format!("report serialization failed: {e}")))?;

    // plot-ready side outputs, written only after all computation succeeded
    if let Some(path) = &cfg.psd_csv {
        csvio::write_psd_csv(path, &psd)?;
    }
    if let Some(path) = &cfg.factor_csv {
        let factor = matrix_factorize(&psd, &cfg.factorization)?;
        csvio::write_factor_norms_csv(path, &factor)?;
    }
    match &args.output {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let filter = args.fixtures.unwrap_or_default();
    let tolerance = args.tolerance.unwrap_or(fixtures::DEFAULT_ORACLE_TOLERANCE);
    let outcomes = fixtures::run_fixtures(&filter, tolerance);
    if outcomes.is_empty() {
        return Err(CliError::input(format!("no fixture matches '{filter}'")));
    }
    let mut all_passed = true;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<24} {}", o.name, o.detail);
        all_passed &= o.passed;
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn run_psd(args: StageArgs) -> Result<ExitCode, CliError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(k) = args.grid_size {
        cfg.grid_size = k;
    }
    let series = load_series(args.input.as_deref(), args.seed, &cfg)?;
    let psd = estimate(&series, &cfg)?;
    csvio::write_psd_csv(&args.output, &psd)?;
    Ok(ExitCode::SUCCESS)
}

fn run_factorize(args: StageArgs) -> Result<ExitCode, CliError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(k) = args.grid_size {
        cfg.grid_size = k;
    }
    let series = load_series(args.input.as_deref(), args.seed, &cfg)?;
    let psd = estimate(&series, &cfg)?;
    let factor = matrix_factorize(&psd, &cfg.factorization)?;
    csvio::write_factor_csv(&args.output, &factor)?;
    Ok(ExitCode::SUCCESS)
}
