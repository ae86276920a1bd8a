//! `domectl`: single decisions, replays, density maps, count evaluation and
//! rule traces from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data fault, 3 config fault.
//! Results go to stdout as `key=value` records; diagnostics go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "domectl", version, about = "Fuzzy dome ventilation controller")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the open duration for one set of readings.
    Decide(DecideArgs),
    /// Replay weather and crowd history hour by hour.
    Simulate(SimulateArgs),
    /// Render a density map from head annotations.
    Densitymap(DensityArgs),
    /// Compare predicted and true head counts (MAE, RMSE).
    Eval(EvalArgs),
    /// Print the full inference trace for one set of readings.
    Explain(DecideArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Configuration file (falls back to $DOMECTL_CONFIG, then the defaults).
    #[arg(long, env = "DOMECTL_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// Crowd ratio in percent of capacity.
    #[arg(long, conflicts_with = "count", required_unless_present = "count")]
    pub crowd: Option<f64>,
    /// Head count; converted to a ratio using --capacity or the configured capacity.
    #[arg(long)]
    pub count: Option<f64>,
    #[arg(long, requires = "count")]
    pub capacity: Option<u64>,
    /// Air temperature in °C.
    #[arg(long, allow_negative_numbers = true)]
    pub temp: f64,
    /// Hardware rain flag.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub rain: bool,
    /// Relative humidity in percent (logged only).
    #[arg(long, default_value_t = 0.0)]
    pub humidity: f64,
    /// Decision time, e.g. 2021-08-01T12:00:00 (defaults to now).
    #[arg(long)]
    pub at: Option<String>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub weather: PathBuf,
    #[arg(long = "crowd-profile")]
    pub crowd_profile: PathBuf,
    /// Log destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Annotation file: `<width> <height>` then one `<x> <y>` per head.
    #[arg(long)]
    pub annotations: PathBuf,
    /// Binary DMAP output.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional plain-text grid export.
    #[arg(long)]
    pub text: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// CSV with `predicted` and `truth` columns.
    #[arg(long, conflicts_with_all = ["predicted", "truth"], required_unless_present = "predicted")]
    pub counts: Option<PathBuf>,
    /// Comma-separated predicted counts.
    #[arg(long, value_delimiter = ',', requires = "truth")]
    pub predicted: Option<Vec<f64>>,
    /// Comma-separated true counts.
    #[arg(long, value_delimiter = ',', requires = "predicted")]
    pub truth: Option<Vec<f64>>,
}

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Config(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Data(m) | Self::Config(m) => m,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Decide(a) => commands::decide(&a),
        Command::Explain(a) => commands::explain(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Densitymap(a) => commands::densitymap(&a),
        Command::Eval(a) => commands::eval(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("domectl: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
