//! Command-line front end: solve, classify, sweep, simulate, kernel-validate.
//!
//! Exit codes: 0 success, 1 error (JSON on stderr), 2 indeterminate.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_classify, cmd_kernel_validate, cmd_simulate, cmd_solve, cmd_sweep, SweepRow};
pub use config::{AmplitudeGrid, InitShape, RunConfig, SimSection, SweepConfig};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nlburgers", version, about = "Traveling waves of u_t + u u_x + u - K*u = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for one wave profile
    Solve(WaveArgs),
    /// Classify a wave as continuous or discontinuous by grid refinement
    Classify(WaveArgs),
    /// Classify over kernels × amplitudes
    Sweep(SweepArgs),
    /// Run the time-dependent finite-volume solver
    Simulate(SimArgs),
    /// Check a kernel against the hypotheses of the existence theorem
    KernelValidate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run config; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Kernel spec, e.g. exp:k=1, gauss:sigma=1, uniform:a=1, tri:a=1, table:k.csv[:renorm]
    #[arg(long)]
    pub kernel: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub length: Option<f64>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub base_cells: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub u_minus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u_plus: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated kernel specs
    #[arg(long, value_delimiter = ',')]
    pub kernels: Option<Vec<String>>,
    /// Comma-separated amplitudes u_- − u_+ (replaces the default log grid)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub amplitudes: Option<Vec<f64>>,
    /// Log-spaced amplitudes as min,max,count
    #[arg(long)]
    pub log_amplitudes: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub end: Option<f64>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub end_time: Option<f64>,
    #[arg(long)]
    pub snapshot_interval: Option<f64>,
    /// tanh:a=2,k=3 or constant:c=1
    #[arg(long)]
    pub init: Option<String>,
    /// Profile CSV written by `solve`
    #[arg(long)]
    pub init_from: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub probes: Option<usize>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn base_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.kernel, common.kernel.clone());
    set(&mut cfg.output, common.out.clone());
    set(&mut cfg.seed, common.seed);
    Ok(cfg)
}

fn apply_solver(cfg: &mut RunConfig, s: &SolverArgs) {
    if s.length.is_some() {
        cfg.length = s.length;
    }
    set(&mut cfg.cells, s.cells);
    set(&mut cfg.base_cells, s.base_cells);
    set(&mut cfg.tol, s.tol);
    set(&mut cfg.max_iter, s.max_iter);
}

fn parse_log_grid(text: &str) -> Result<AmplitudeGrid> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Error::Config(format!("--log-amplitudes expects min,max,count, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(AmplitudeGrid {
        min: parts[0].parse().map_err(|_| bad())?,
        max: parts[1].parse().map_err(|_| bad())?,
        count: parts[2].parse().map_err(|_| bad())?,
    })
}

/// Resolves the config for a parsed command line: file first, then flags.
pub fn resolve(command: &Command) -> Result<RunConfig> {
    let mut cfg = match command {
        Command::Solve(a) | Command::Classify(a) => {
            let mut cfg = base_config(&a.common)?;
            apply_solver(&mut cfg, &a.solver);
            if a.u_minus.is_some() {
                cfg.u_minus = a.u_minus;
            }
            if a.u_plus.is_some() {
                cfg.u_plus = a.u_plus;
            }
            cfg
        }
        Command::Sweep(a) => {
            let mut cfg = base_config(&a.common)?;
            apply_solver(&mut cfg, &a.solver);
            set(&mut cfg.sweep.kernels, a.kernels.clone());
            if let Some(list) = &a.amplitudes {
                cfg.sweep.amplitudes = list.clone();
                cfg.sweep.log_amplitudes = None;
            }
            if let Some(text) = &a.log_amplitudes {
                cfg.sweep.log_amplitudes = Some(parse_log_grid(text)?);
            }
            set(&mut cfg.sweep.center, a.center);
            cfg
        }
        Command::Simulate(a) => {
            let mut cfg = base_config(&a.common)?;
            let s = &mut cfg.sim;
            set(&mut s.start, a.start);
            set(&mut s.end, a.end);
            set(&mut s.cells, a.cells);
            set(&mut s.cfl, a.cfl);
            set(&mut s.end_time, a.end_time);
            set(&mut s.snapshot_interval, a.snapshot_interval);
            set(&mut s.init, a.init.clone());
            if a.init_from.is_some() {
                s.init_from = a.init_from.clone();
            }
            cfg
        }
        Command::KernelValidate(a) => {
            let mut cfg = base_config(&a.common)?;
            set(&mut cfg.probes, a.probes);
            cfg
        }
    };
    cfg.validate()?;
    if cfg.output.as_os_str().is_empty() {
        cfg.output = PathBuf::from(".");
    }
    Ok(cfg)
}

fn report_error(err: &Error) {
    let body = serde_json::json!({ "error": err.kind(), "message": err.to_string() });
    eprintln!("{body}");
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let body = serde_json::json!({ "error": "usage", "message": e.to_string() });
            eprintln!("{body}");
            return EXIT_ERROR;
        }
    };
    let outcome = resolve(&cli.command).and_then(|cfg| match &cli.command {
        Command::Solve(_) => cmd_solve(&cfg),
        Command::Classify(_) => cmd_classify(&cfg),
        Command::Sweep(_) => cmd_sweep(&cfg),
        Command::Simulate(_) => cmd_simulate(&cfg),
        Command::KernelValidate(_) => cmd_kernel_validate(&cfg),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            EXIT_ERROR
        }
    }
}
