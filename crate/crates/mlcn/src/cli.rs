//! Command-line front end: scenario runs, parameter calibration, and
//! reference fixture emission.
//!
//! Exit codes are a stable contract: 0 success, 2 usage/validation error,
//! 3 generation failure, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mlcn::calibrate::{calibrate, ORDERING_THRESHOLD};
use mlcn::fixtures::write_fixtures;
use mlcn::report::{build_report, emit, OutputFormat, ReportError, RunReport};
use mlcn::scenario::{run_scenario, Mode, RunError, ScenarioConfig};
use mlcn::MlcnConfig;

#[derive(Parser)]
#[command(
    name = "mlcn",
    version,
    about = "Centrality-targeted failure simulation on a three-layer network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a failure scenario and write per-step metrics
    Run(RunArgs),
    /// Monte-Carlo probe of generation parameters
    Calibrate(CalibrateArgs),
    /// Write the small reference graphs with expected-value sidecars
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Vertex count shared by all three layers
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    /// L1 edge probability
    #[arg(long, default_value_t = 0.04)]
    l1_p: f64,
    /// L2 edge probability
    #[arg(long, default_value_t = 0.15)]
    l2_p: f64,
    /// L3 preferential-attachment edges per vertex
    #[arg(long, default_value_t = 25)]
    l3_m: usize,
    /// Bound on |skewness| of the L1 hop histogram
    #[arg(long, default_value_t = 0.5)]
    gauss_max_skew: f64,
    /// Resample budget against the gaussian gate
    #[arg(long, default_value_t = 100)]
    gauss_attempts: usize,
    /// Master seed; all randomness derives from it
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl GenArgs {
    fn mlcn_config(&self) -> MlcnConfig {
        MlcnConfig {
            n: self.nodes,
            l1_p: self.l1_p,
            l2_p: self.l2_p,
            l3_m: self.l3_m,
            gauss_max_skew: self.gauss_max_skew,
            gauss_attempts: self.gauss_attempts,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sebc,
    Debc,
    Snbc,
    Dnbc,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sebc => Mode::Sebc,
            ModeArg::Debc => Mode::Debc,
            ModeArg::Snbc => Mode::Snbc,
            ModeArg::Dnbc => Mode::Dnbc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Failure ordering regime
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[command(flatten)]
    gen: GenArgs,
    /// Edges (edge modes) or nodes (node modes) to fail
    #[arg(long, default_value_t = 60)]
    failures: usize,
    /// Independent replicates to run
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Output file format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path; defaults to metrics.<format>
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rolling window of the chaotic-onset scan
    #[arg(long, default_value_t = 5)]
    chaos_window: usize,
    /// Worker threads for replicate fan-out; determinism is unconditional
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Independent parameter-set samples to draw
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args)]
struct FixturesArgs {
    /// Directory for the fixture files
    #[arg(long, default_value = "fixtures")]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    Generation(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Generation(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Generation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => CliError::Usage(c.to_string()),
            RunError::Generation { .. } => CliError::Generation(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Calibrate(args) => run_calibrate(args),
        Command::Fixtures(args) => run_fixtures(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_workers: usize, f: impl FnOnce() -> T) -> T {
    f()
}

fn run(args: RunArgs) -> Result<(), CliError> {
    if args.chaos_window < 3 {
        return Err(CliError::Usage(format!(
            "chaos window must be at least 3, got {}",
            args.chaos_window
        )));
    }
    if args.workers < 1 {
        return Err(CliError::Usage("workers must be at least 1".into()));
    }
    let cfg = ScenarioConfig {
        mlcn: args.gen.mlcn_config(),
        mode: args.mode.into(),
        failures: args.failures,
        seed: args.gen.seed,
        replicates: args.replicates,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let series = with_workers(args.workers, || run_scenario(&cfg))?;
    let format: OutputFormat = args.format.into();
    let report = build_report(&series, args.chaos_window, format)?;
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("metrics.{}", format.extension())));
    emit(&report, &out)?;
    println!("{}", summary_line(&report, &out.display().to_string()));
    Ok(())
}

fn summary_line(report: &RunReport, out: &str) -> String {
    let replicates = report.replicates.len();
    let steps_done = report
        .replicates
        .iter()
        .map(|r| r.records.last().map_or(0, |rec| rec.step))
        .min()
        .unwrap_or(0);
    let truncated = report.replicates.iter().filter(|r| r.truncated).count();
    let onsets: Vec<u32> = report
        .replicates
        .iter()
        .filter_map(|r| {
            r.chaos
                .iter()
                .find(|c| c.parameter == "l2_aspl")
                .and_then(|c| c.onset_step)
        })
        .collect();
    let onset = if onsets.is_empty() {
        format!("l2_aspl_onset=0/{replicates}")
    } else {
        let mut sorted = onsets.clone();
        sorted.sort_unstable();
        format!(
            "l2_aspl_onset={}/{replicates} (median step {})",
            onsets.len(),
            sorted[sorted.len() / 2]
        )
    };
    format!(
        "mode={} nodes={} failures={} replicates={replicates} steps={steps_done} truncated={truncated} {onset} out={out}",
        report.mode, report.config.nodes, report.config.failures
    )
}

fn run_calibrate(args: CalibrateArgs) -> Result<(), CliError> {
    if args.samples < 1 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let cfg = args.gen.mlcn_config();
    cfg.validate_ranges()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = calibrate(&cfg, args.samples, args.gen.seed);
    println!(
        "calibrate: samples={} nodes={} l1_p={} l2_p={} l3_m={} gauss_max_skew={}",
        report.samples, cfg.n, cfg.l1_p, cfg.l2_p, cfg.l3_m, cfg.gauss_max_skew
    );
    println!(
        "gaussian gate pass rate: {:.3} (disconnected {}, skewness {}, non-interior mode {}, min-degree budget {})",
        report.gate_pass_rate(),
        report.connectivity_failures,
        report.skew_failures,
        report.mode_failures,
        report.min_degree_failures
    );
    println!(
        "mean tne over {} builds: L1={:.1} L2={:.1} L3={:.1} (build failures {})",
        report.samples - report.build_failures,
        report.mean_tne[0],
        report.mean_tne[1],
        report.mean_tne[2],
        report.build_failures
    );
    println!(
        "tne ordering L1<L2<L3: {}/{} ({:.1}%) -> {}",
        report.ordering_hits,
        report.samples,
        100.0 * report.ordering_rate(),
        if report.ordering_ok() {
            "ok"
        } else {
            "FAILED"
        }
    );
    println!("ordering threshold: {:.0}%", 100.0 * ORDERING_THRESHOLD);
    Ok(())
}

fn run_fixtures(args: FixturesArgs) -> Result<(), CliError> {
    let written = write_fixtures(&args.out)?;
    println!("wrote {} fixture files to {}", written.len(), args.out.display());
    Ok(())
}
