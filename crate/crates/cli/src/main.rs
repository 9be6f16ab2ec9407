//! `lupus`: benchmark sweeps, schedule curves, data exploration, and training
//! and evaluation of the swarm-trained heart-disease classifier.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use lupus_core::curves::{CurveParams, InertiaScaling};

use crate::config::parse_curve;

const AFTER_HELP: &str = "Settings are resolved as: command-line flag, then the --config JSON file, \
then the default shown here. LUPUS_SEED supplies the seed when neither a flag nor the file sets it.";

#[derive(Debug, Parser)]
#[command(name = "lupus", version, about, after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the benchmark sweep and write the summary table and convergence series.
    Bench(BenchArgs),
    /// Dump the control parameter, inertia and leader-weight curves.
    Curves(CurvesArgs),
    /// Clean the heart-disease table and write its correlation matrix.
    Eda(EdaArgs),
    /// Train the classifier and write the model and a training report.
    Train(TrainArgs),
    /// Re-evaluate a saved model on its test split.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed; every random stream is derived from it.
    #[arg(long, env = "LUPUS_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Inertia curve parameters a,b,c,d.
    #[arg(long, value_parser = parse_curve, default_value = "1,0,2,1.7")]
    pub inertia: CurveParams<f64>,
    /// Leader weight curve parameters a,b,c,d.
    #[arg(long, value_parser = parse_curve, default_value = "1,0,2,2.1")]
    pub leader: CurveParams<f64>,
    /// How the inertia curve enters the position update.
    #[arg(long, value_enum, default_value_t = ScalingArg::PeakNormalized)]
    pub inertia_scaling: ScalingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScalingArg {
    Raw,
    PeakNormalized,
}

impl From<ScalingArg> for InertiaScaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Raw => InertiaScaling::Raw,
            ScalingArg::PeakNormalized => InertiaScaling::PeakNormalized,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub curves: CurveArgs,
    /// Benchmark ids (f1..f6, f5r).
    #[arg(long, value_delimiter = ',', default_value = "f1,f2,f3,f4,f5,f6")]
    pub functions: Vec<String>,
    /// Problem dimensions.
    #[arg(long, value_delimiter = ',', default_value = "30")]
    pub dims: Vec<usize>,
    /// Algorithms (pso, gwo, cgwo, agwo, acgwo).
    #[arg(long, value_delimiter = ',', default_value = "pso,gwo,cgwo,agwo,acgwo")]
    pub algs: Vec<String>,
    /// Independent runs per cell.
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Swarm size.
    #[arg(long, default_value_t = 40)]
    pub agents: usize,
    /// Iterations per run.
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub curves: CurveArgs,
    /// Iteration horizon; rows run from 0 to this value inclusive.
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Heart-disease CSV (13 features and the target, "?" for missing).
    #[arg(long, default_value = "data/heart.csv")]
    pub data: PathBuf,
    /// Impute missing cells with the column mode instead of dropping rows (off by default).
    #[arg(long)]
    pub impute: bool,
    /// Expand categorical columns into indicator columns (off by default).
    #[arg(long)]
    pub one_hot: bool,
}

#[derive(Debug, Args)]
pub struct EdaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Heart-disease CSV (13 features and the target, "?" for missing).
    #[arg(long, default_value = "data/heart.csv")]
    pub data: PathBuf,
    /// Impute missing cells with the column mode instead of dropping rows (off by default).
    #[arg(long)]
    pub impute: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub curves: CurveArgs,
    #[command(flatten)]
    pub data: DataArgs,
    /// Training mode: acgwo, bp or acgwo-bp.
    #[arg(long, default_value = "acgwo-bp")]
    pub mode: String,
    /// Grey wolf variant used for the swarm phase.
    #[arg(long, default_value = "acgwo")]
    pub variant: String,
    /// Hidden layer sizes.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub hidden: Vec<usize>,
    /// Swarm size.
    #[arg(long, default_value_t = 100)]
    pub agents: usize,
    /// Swarm iterations.
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    /// Lower bound of every weight during the swarm phase.
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub lower: f64,
    /// Upper bound of every weight during the swarm phase.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub upper: f64,
    /// Gradient-descent epochs (after the swarm in acgwo-bp mode).
    #[arg(long, default_value_t = commands::DEFAULT_BP_EPOCHS)]
    pub bp_epochs: usize,
    /// Gradient-descent learning rate.
    #[arg(long, default_value_t = commands::DEFAULT_LR)]
    pub lr: f64,
    /// Decision threshold on the output probability.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Fraction of each class used for training.
    #[arg(long, default_value_t = 0.7)]
    pub train_fraction: f64,
    /// Model file (default: <out>/model.json).
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model file written by `train`.
    #[arg(long, default_value = "results/model.json")]
    pub model: PathBuf,
    /// Heart-disease CSV the model was trained on.
    #[arg(long, default_value = "data/heart.csv")]
    pub data: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

/// A failure carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<lupus_core::Error> for CliError {
    fn from(e: lupus_core::Error) -> Self {
        use lupus_core::Error as E;
        let code = match &e {
            E::Config(_) | E::Domain(_) => EXIT_USAGE,
            E::Parse { .. } | E::Data(_) | E::Io { .. } | E::Json(_) => EXIT_DATA,
            E::Internal(_) => EXIT_INTERNAL,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let sub = matches.subcommand().map(|(_, m)| m).expect("subcommand is required");
    match commands::dispatch(cli.command, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
