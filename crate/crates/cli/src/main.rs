#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod quantity;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use parapon_core::config::{OutputFormat, ToolConfig};
use parapon_core::Error;

use quantity::{parse_duration, parse_frequency};

/// Fiber parametric amplifier and hybrid WDM/TDM PON calculator.
#[derive(Debug, Parser)]
#[command(name = "parapon", version, about)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true, env = parapon_core::config::CONFIG_ENV)]
    config: Option<PathBuf>,

    /// Print the formula corrections built into the models and exit.
    #[arg(long)]
    errata: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form parametric gain for one operating point.
    Gain(GainArgs),
    /// Compare the closed-form gain against the coupled-wave integration.
    OdeVerify(OdeVerifyArgs),
    /// Parametric pulse source: width, amplitude and MTDM bit rates.
    Pulse(PulseArgs),
    /// Per-user bandwidth, service window, delay and link spacing.
    Capacity(CapacityArgs),
    /// Run a figure preset or a sweep spec file and write CSV + JSON.
    Sweep(SweepArgs),
    /// List the figure presets.
    Presets,
    /// Print the formula corrections built into the models.
    Errata,
}

#[derive(Debug, Clone, Args)]
pub struct FiberArgs {
    /// Fiber preset (SMF or HNLF); defaults to the config file's fiber.
    #[arg(long)]
    pub fiber: Option<String>,
    /// Override the nonlinear coefficient, 1/(W km).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Override the parametric gain slope, dB/(W km).
    #[arg(long)]
    pub sp: Option<f64>,
    /// Override the zero-dispersion wavelength, um.
    #[arg(long)]
    pub lambda0: Option<f64>,
    /// Override the dispersion slope, ps/(nm^2 km).
    #[arg(long)]
    pub disp_slope: Option<f64>,
}

/// How the linear phase mismatch is chosen. Without any of these flags the
/// point is phase matched.
#[derive(Debug, Clone, Args)]
pub struct MismatchArgs {
    /// Linear phase mismatch, 1/m.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["phase_matched", "lambda_s"])]
    pub delta_beta: Option<f64>,
    /// Perfect phase matching: delta_beta = -2 gamma P.
    #[arg(long, conflicts_with = "lambda_s")]
    pub phase_matched: bool,
    /// Signal wavelength, um (mismatch from the dispersion slope).
    #[arg(long, requires = "lambda_p")]
    pub lambda_s: Option<f64>,
    /// Pump wavelength, um.
    #[arg(long)]
    pub lambda_p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    #[command(flatten)]
    pub fiber: FiberArgs,
    #[command(flatten)]
    pub mismatch: MismatchArgs,
    /// Pump power, W (defaults to the config pump peak power).
    #[arg(long)]
    pub pump_power: Option<f64>,
    /// Fiber length, km.
    #[arg(long)]
    pub length: f64,
    /// Use the loss-weighted effective length instead of the length.
    #[arg(long)]
    pub effective_length: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OdeVerifyArgs {
    #[command(flatten)]
    pub fiber: FiberArgs,
    #[command(flatten)]
    pub mismatch: MismatchArgs,
    #[arg(long)]
    pub pump_power: Option<f64>,
    /// Fiber length, km.
    #[arg(long)]
    pub length: f64,
    #[arg(long)]
    pub effective_length: bool,
    /// Seed signal power as a fraction of the pump power.
    #[arg(long, default_value_t = 1e-8)]
    pub seed_ratio: f64,
    /// Largest accepted relative difference between the two gains.
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    /// Fixed RK4 step, m (default length/4096).
    #[arg(long, conflicts_with = "rtol")]
    pub step: Option<f64>,
    /// Use the adaptive integrator with this relative tolerance.
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PulseArgs {
    #[command(flatten)]
    pub fiber: FiberArgs,
    #[command(flatten)]
    pub mismatch: MismatchArgs,
    /// Peak pump power, W.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Pump modulation frequency, e.g. 10GHz.
    #[arg(long, value_parser = parse_frequency)]
    pub fm: Option<f64>,
    /// Fiber length, km.
    #[arg(long)]
    pub length: f64,
    #[arg(long)]
    pub effective_length: bool,
    /// Chirp parameter C of the Gaussian envelope.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub chirp: f64,
    #[arg(long)]
    pub n_links: Option<u32>,
    #[arg(long)]
    pub n_channels: Option<u32>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Lasers at the OLT.
    #[arg(long)]
    pub k: Option<u32>,
    /// AWG input ports.
    #[arg(long)]
    pub n: Option<u32>,
    /// AWG output ports.
    #[arg(long)]
    pub m: Option<u32>,
    /// Line data rate, Gbit/s.
    #[arg(long)]
    pub d: Option<f64>,
    /// Slot per ONU, e.g. 100us.
    #[arg(long, value_parser = parse_duration)]
    pub slot: Option<f64>,
    /// Laser switching time, e.g. 25us.
    #[arg(long, value_parser = parse_duration)]
    pub tlaser: Option<f64>,
    /// Network utilization in [0, 1].
    #[arg(long)]
    pub rho: Option<f64>,
    /// Number of users.
    #[arg(long)]
    pub w: Option<u32>,
    /// Average slot per user, e.g. 100us.
    #[arg(long, value_parser = parse_duration)]
    pub ttx: Option<f64>,
    #[arg(long)]
    pub n_links: Option<u32>,
    #[arg(long)]
    pub n_channels: Option<u32>,
    /// Pulse width for the MTDM bit rates, e.g. 4.11ps.
    #[arg(long, value_parser = parse_duration)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure preset, fig2 .. fig18.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
    pub preset: Option<String>,
    /// Sweep spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output directory.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Evaluate the grid on one thread.
    #[arg(long)]
    pub serial: bool,
}

/// Exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const NUMERICAL: u8 = 3;
    pub const IO: u8 = 4;
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Domain(_) | Error::Config(_) | Error::Serialization(_)) => exit::CONFIG,
        Some(Error::Range(_) | Error::Numerical(_) | Error::StepBudget { .. }) => exit::NUMERICAL,
        Some(Error::Io(_)) => exit::IO,
        None => exit::CONFIG,
    }
}

fn load_config(path: Option<&PathBuf>) -> parapon_core::Result<ToolConfig> {
    match path {
        Some(p) => ToolConfig::load(p),
        None => Ok(ToolConfig::default()),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if cli.errata {
        print!("{}", parapon_core::errata::render());
        return Ok(exit::OK);
    }
    let Some(command) = cli.command else {
        anyhow::bail!(Error::Config("no command given; see --help".into()));
    };
    let cfg = load_config(cli.config.as_ref())?;
    match command {
        Command::Gain(a) => commands::gain(&cfg, &a),
        Command::OdeVerify(a) => commands::ode_verify(&cfg, &a),
        Command::Pulse(a) => commands::pulse(&cfg, &a),
        Command::Capacity(a) => commands::capacity(&cfg, &a),
        Command::Sweep(a) => commands::sweep(&cfg, &a),
        Command::Presets => commands::presets(),
        Command::Errata => {
            print!("{}", parapon_core::errata::render());
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
