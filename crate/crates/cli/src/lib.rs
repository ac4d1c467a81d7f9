//! Command-line front end for the contact-dynamics library.
//!
//! Subcommands: `simulate` (one trajectory), `preset` (canned experiments
//! fig1..fig4 and table1), `scan` (step-size stability), `convergence`
//! (order measurement) and `benchmark` (wall time + evaluation counts).
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 usage or
//! configuration error, 2 model-signaled failure (the run terminated early;
//! data up to the failure is still written).

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::OutputFormat;

/// Configuration or usage error: exit code 1.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::config(format!("i/o error: {err}"))
    }
}

/// What a successfully parsed command reports back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Everything completed: exit 0.
    Success,
    /// The simulation terminated on a model-signaled failure; outputs were
    /// still written: exit 2.
    RunFailed,
}

#[derive(Debug, Parser)]
#[command(
    name = "contact",
    about = "Structure-preserving integrators for dissipative mechanics",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file (simulate/scan/convergence/benchmark) or directory
    /// (preset); stdout / ./out when absent
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Sample output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Suppress progress and summary chatter on stdout
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one trajectory and write its samples
    Simulate(SimulateArgs),
    /// Run a canned experiment and write its data files
    Preset(PresetArgs),
    /// Classify step-size stability for several methods
    Scan(ScanArgs),
    /// Measure a method's convergence order by step refinement
    Convergence(ConvergenceArgs),
    /// Compare wall time and evaluation counts across methods
    Benchmark(BenchmarkArgs),
}

/// Model selection plus per-model parameters. Parameters belonging to a
/// different model than the selected one are rejected.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Model id: kepler, quadratic_oscillator or linear_oscillator
    #[arg(long)]
    pub model: Option<String>,

    /// (kepler) gravitational parameter
    #[arg(long)]
    pub mu: Option<f64>,
    /// (kepler) forcing amplitude
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// (kepler) forcing angular frequency
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// (kepler) close-approach guard radius
    #[arg(long = "eps-radius")]
    pub eps_radius: Option<f64>,
    /// (quadratic_oscillator) action coefficient
    #[arg(long)]
    pub gamma: Option<f64>,
    /// (quadratic_oscillator) potential offset
    #[arg(long = "C")]
    pub big_c: Option<f64>,
    /// (linear_oscillator) stiffness
    #[arg(long)]
    pub omega0: Option<f64>,
    /// (linear_oscillator) damping coefficient
    #[arg(long)]
    pub damping: Option<f64>,
}

/// Initial-state overrides; vectors are comma-separated (e.g. `--q0 1,0`).
#[derive(Debug, Clone, Default, Args)]
pub struct InitialArgs {
    /// Initial position, comma-separated components
    #[arg(long, allow_negative_numbers = true)]
    pub q0: Option<String>,
    /// Initial momentum, comma-separated components
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<String>,
    /// Initial action coordinate
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    /// Initial time
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub model: ModelArgs,

    /// Method id: chi2, chi4, chi6, ... (even), cvi2, rk4, midpoint
    #[arg(long)]
    pub method: Option<String>,
    /// Use the halved potential-action update in the B sub-map
    #[arg(long = "b-map-compat")]
    pub b_map_compat: bool,

    /// Step size
    #[arg(long)]
    pub tau: Option<f64>,
    /// Integrate until this time
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,

    #[command(flatten)]
    pub initial: InitialArgs,

    /// Store every k-th sample
    #[arg(long = "sample-every")]
    pub sample_every: Option<usize>,

    /// Seed for randomized test utilities (carried in the config)
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    /// One of: fig1, fig2, fig3, fig4, table1
    pub name: String,

    /// Run fig1 at its full horizon (200000 time units) instead of the
    /// desk-scaled 20000
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Comma-separated method ids
    #[arg(long, default_value = "chi2,cvi2,rk4")]
    pub methods: String,

    /// Comma-separated step sizes
    #[arg(long = "tau-grid")]
    pub tau_grid: String,

    #[arg(long = "t-end", default_value_t = 500.0)]
    pub t_end: f64,

    /// A run is stable when every sampled state stays inside this max-norm
    /// bound
    #[arg(long, default_value_t = 100.0)]
    pub bound: f64,

    #[command(flatten)]
    pub initial: InitialArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long)]
    pub method: String,
    #[arg(long = "b-map-compat")]
    pub b_map_compat: bool,

    /// Comma-separated decreasing step sizes (at least 3)
    #[arg(long = "tau-list", default_value = "0.2,0.1,0.05,0.025")]
    pub tau_list: String,

    #[arg(long = "t-end", default_value_t = 10.0)]
    pub t_end: f64,

    #[command(flatten)]
    pub initial: InitialArgs,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, default_value = "chi2,cvi2,rk4,midpoint")]
    pub methods: String,

    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,

    #[arg(long = "t-end", default_value_t = 500.0)]
    pub t_end: f64,

    #[arg(long, default_value_t = 10)]
    pub repeats: usize,

    #[command(flatten)]
    pub initial: InitialArgs,
}

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Simulate(args) => commands::simulate(args, cli),
        Command::Preset(args) => presets::run_preset(args, cli),
        Command::Scan(args) => commands::scan(args, cli),
        Command::Convergence(args) => commands::convergence(args, cli),
        Command::Benchmark(args) => commands::benchmark(args, cli),
    }
}

/// Parse a comma-separated list of floats, naming the flag on failure.
pub(crate) fn parse_float_list(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|piece| !piece.is_empty())
        .map(|piece| {
            piece
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{flag}: `{piece}` is not a number")))
        })
        .collect()
}

pub(crate) fn parse_method_list(
    text: &str,
) -> Result<Vec<contact_dynamics::integrators::StepMethod>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|piece| !piece.is_empty())
        .map(|piece| {
            piece
                .parse()
                .map_err(|err| CliError::config(format!("methods: {err}")))
        })
        .collect()
}
