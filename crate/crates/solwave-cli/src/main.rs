//! `solwave` — command-line laboratory for fully nonlinear solitary water
//! waves: solve the free-boundary problem, dump pressure/velocity fields,
//! verify the dynamic-pressure properties, bound wave height from bed-gauge
//! records, and sweep amplitude ladders into summary tables.
//!
//! Every subcommand resolves one effective configuration (defaults ⊕ config
//! file ⊕ flags), echoes it into each artifact it writes, and follows a
//! fixed exit-code contract: 0 success, 1 verification failure, 2 solver
//! non-convergence, 3 invalid input.

mod commands;
mod config;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{OutputFormat, RunConfig, RunConfigFile};

/// Errors that end the process, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input of any kind: flags, config files, trace files, physics
    /// preconditions. Exit 3.
    Invalid(String),
    /// The solver ran but did not reach its tolerance. Exit 2.
    NoConvergence(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 3,
            CliError::NoConvergence(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::NoConvergence(m) => f.write_str(m),
        }
    }
}

/// Shorthand for mapping any library error into exit code 3.
pub(crate) fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

impl From<solwave::SolverError> for CliError {
    fn from(e: solwave::SolverError) -> Self {
        match e {
            solwave::SolverError::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

const AFTER_HELP: &str = "\
exit codes:
  0  success (for `verify`/`sweep`: every property passed)
  1  verification failure
  2  solver non-convergence
  3  invalid input

environment:
  SOLWAVE_OUT_DIR  output directory, used when neither --out-dir nor the
                   config file selects one";

#[derive(Parser)]
#[command(name = "solwave", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for one solitary wave and store it as a JSON artifact.
    Solve(SolveArgs),
    /// Sample a stored wave's fields on a boundary-fitted grid.
    Fields(FieldsArgs),
    /// Run the full dynamic-pressure property suite on a stored wave.
    Verify(VerifyArgs),
    /// Lower-bound the crest height from a bed-pressure record (CSV).
    EstimateHeight(EstimateArgs),
    /// Solve an amplitude ladder; verify and summarize each wave.
    Sweep(SweepArgs),
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct CommonFlags {
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for artifacts (default: config, then $SOLWAVE_OUT_DIR, then `.`).
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

/// Physical environment flags.
#[derive(Args)]
struct EnvFlags {
    /// Gravitational acceleration.
    #[arg(long)]
    gravity: Option<f64>,
    /// Undisturbed water depth.
    #[arg(long)]
    depth: Option<f64>,
    /// Atmospheric pressure per unit density.
    #[arg(long)]
    p_atm: Option<f64>,
}

impl EnvFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.gravity {
            cfg.gravity = v;
        }
        if let Some(v) = self.depth {
            cfg.depth = v;
        }
        if let Some(v) = self.p_atm {
            cfg.p_atm = v;
        }
    }
}

/// Solver target and discretization flags.
#[derive(Args)]
struct SolverFlags {
    /// Crest elevation target (length units).
    #[arg(long)]
    amplitude: Option<f64>,
    /// Froude number target, must be > 1.
    #[arg(long)]
    froude: Option<f64>,
    /// Spectral modes; power of two ≥ 64.
    #[arg(long)]
    modes: Option<usize>,
    /// Truncation half-length (default: auto).
    #[arg(long)]
    half_length: Option<f64>,
    /// Solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Amplitude/depth cap override.
    #[arg(long)]
    amplitude_cap: Option<f64>,
}

impl SolverFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        if self.amplitude.is_some() {
            cfg.amplitude = self.amplitude;
            // An explicit amplitude flag replaces a froude target from the
            // config file, and vice versa.
            if self.froude.is_none() {
                cfg.froude = None;
            }
        }
        if self.froude.is_some() {
            cfg.froude = self.froude;
            if self.amplitude.is_none() {
                cfg.amplitude = None;
            }
        }
        if let Some(v) = self.modes {
            cfg.modes = v;
        }
        if self.half_length.is_some() {
            cfg.half_length = self.half_length;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if self.amplitude_cap.is_some() {
            cfg.amplitude_cap = self.amplitude_cap;
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    env: EnvFlags,
    #[command(flatten)]
    solver: SolverFlags,
    /// Solution artifact path (default: <out-dir>/solution.json).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FieldsArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Solution file written by `solve`.
    #[arg(long, value_name = "PATH")]
    solution: PathBuf,
    /// Grid stations over [−span, span]; 0 dumps only the crest column.
    #[arg(long)]
    stations: Option<usize>,
    /// Vertical nodes per station (bed to surface).
    #[arg(long)]
    nodes: Option<usize>,
    /// Horizontal half-extent of the grid (default: full half-length).
    #[arg(long)]
    span: Option<f64>,
    /// Artifact format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Skip the companion plot-script file.
    #[arg(long)]
    no_plot_script: bool,
    /// Primary artifact path; companions share its stem.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Solution file written by `solve`.
    #[arg(long, value_name = "PATH")]
    solution: PathBuf,
    /// Stations of the verifier's sampling grid.
    #[arg(long)]
    grid_stations: Option<usize>,
    /// Nodes per station of the verifier's sampling grid.
    #[arg(long)]
    grid_nodes: Option<usize>,
    /// Finite-difference step (in depths) of the curvature check.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Strictness floor (×g·d): smaller values cannot certify inequalities.
    #[arg(long)]
    noise_floor: Option<f64>,
    /// Tie band (×g·d) for decayed-tail comparisons.
    #[arg(long)]
    noise_band: Option<f64>,
    /// Report path (default: <out-dir>/report.json).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    env: EnvFlags,
    /// Bed-pressure record: CSV with header `x,pressure` or `t,pressure`.
    #[arg(long, value_name = "PATH")]
    trace: PathBuf,
    /// Fraction of samples pooled from each end for the asymptote estimate.
    #[arg(long)]
    tail_fraction: Option<f64>,
    /// Bound artifact path (default: <out-dir>/bound.json).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonFlags,
    #[command(flatten)]
    env: EnvFlags,
    /// Ascending crest elevations, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "A1,A2,…")]
    amplitudes: Option<Vec<f64>>,
    /// Spectral modes; power of two ≥ 64.
    #[arg(long)]
    modes: Option<usize>,
    /// Solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Gaussian noise level for the synthetic bed records (0 = off).
    #[arg(long)]
    noise: Option<f64>,
    /// Base RNG seed for the synthetic bed records.
    #[arg(long)]
    seed: Option<u64>,
}

/// Defaults ⊕ config file; flag layers are applied by each subcommand.
fn base_config(common: &CommonFlags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let file: RunConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        file.apply(&mut cfg);
    }
    Ok(cfg)
}

/// Resolves the output directory into the config so artifacts echo it:
/// flag, then config file, then SOLWAVE_OUT_DIR, then the working directory.
fn resolve_out_dir(cfg: &mut RunConfig, flag: &Option<PathBuf>) {
    if let Some(dir) = flag {
        cfg.out_dir = Some(dir.display().to_string());
    } else if cfg.out_dir.is_none() {
        if let Ok(dir) = std::env::var("SOLWAVE_OUT_DIR") {
            if !dir.is_empty() {
                cfg.out_dir = Some(dir);
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => {
            let mut cfg = base_config(&args.common)?;
            args.env.apply(&mut cfg);
            args.solver.apply(&mut cfg);
            resolve_out_dir(&mut cfg, &args.common.out_dir);
            commands::run_solve(&cfg, args.out)
        }
        Command::Fields(args) => {
            let mut cfg = base_config(&args.common)?;
            if let Some(v) = args.stations {
                cfg.grid_stations = v;
            }
            if let Some(v) = args.nodes {
                cfg.grid_nodes = v;
            }
            if args.span.is_some() {
                cfg.grid_span = args.span;
            }
            if let Some(v) = args.format {
                cfg.format = v;
            }
            resolve_out_dir(&mut cfg, &args.common.out_dir);
            commands::run_fields(&cfg, &args.solution, args.out, !args.no_plot_script)
        }
        Command::Verify(args) => {
            let mut cfg = base_config(&args.common)?;
            if let Some(v) = args.grid_stations {
                cfg.verify.grid_stations = v;
            }
            if let Some(v) = args.grid_nodes {
                cfg.verify.grid_nodes = v;
            }
            if let Some(v) = args.fd_step {
                cfg.verify.fd_step = v;
            }
            if let Some(v) = args.noise_floor {
                cfg.verify.noise_floor = v;
            }
            if let Some(v) = args.noise_band {
                cfg.verify.noise_band = v;
            }
            resolve_out_dir(&mut cfg, &args.common.out_dir);
            commands::run_verify(&cfg, &args.solution, args.out)
        }
        Command::EstimateHeight(args) => {
            let mut cfg = base_config(&args.common)?;
            args.env.apply(&mut cfg);
            if let Some(v) = args.tail_fraction {
                cfg.tail_fraction = v;
            }
            resolve_out_dir(&mut cfg, &args.common.out_dir);
            commands::run_estimate(&cfg, &args.trace, args.out)
        }
        Command::Sweep(args) => {
            let mut cfg = base_config(&args.common)?;
            args.env.apply(&mut cfg);
            if let Some(v) = args.amplitudes {
                cfg.amplitudes = v;
            }
            if let Some(v) = args.modes {
                cfg.modes = v;
            }
            if let Some(v) = args.tol {
                cfg.tol = v;
            }
            if let Some(v) = args.noise {
                cfg.noise_sigma = v;
            }
            if let Some(v) = args.seed {
                cfg.seed = v;
            }
            resolve_out_dir(&mut cfg, &args.common.out_dir);
            commands::run_sweep(&cfg)
        }
    }
}

fn main() -> ExitCode {
    // Flag misuse is invalid input (exit 3); help and version are successes.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
