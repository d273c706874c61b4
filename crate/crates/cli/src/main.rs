//! `rqc`: exact Weingarten and moment tables, asymptotic predictions and
//! Monte Carlo comparisons for random quantum channels.
//!
//! Exit status is 0 on success, 1 when a `compare` row fails its tolerance
//! and 2 for usage or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RQC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "rqc", version, about = "Moments and spectra of random quantum channel outputs")]
pub struct Cli {
    /// Flat JSON file of parameter values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for Monte Carlo runs (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file. Without it, output goes to `$RQC_OUT_DIR/<command>.<ext>`
    /// when that variable is set, and to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Weingarten function on the classes of S_p.
    Wg(WgArgs),
    /// Exact moments E tr Z^p, p = 1..=P.
    Moments(MomentsArgs),
    /// Free probability: free Poisson moments and moment/cumulant transforms.
    #[command(subcommand)]
    Freeprob(FreeprobCommand),
    /// Limit objects of a model in a scaling regime (JSON).
    Predict(PredictArgs),
    /// Monte Carlo statistics of sampled output spectra.
    Mc(McArgs),
    /// Exact moments against Monte Carlo means and asymptotic predictions.
    Compare(CompareArgs),
    /// Mean output entropy over a range of sizes against its expansion.
    EntropySweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Wg(_) => "wg",
            Self::Moments(_) => "moments",
            Self::Freeprob(FreeprobCommand::Mp(_)) => "freeprob-mp",
            Self::Freeprob(FreeprobCommand::Transform(_)) => "freeprob-transform",
            Self::Predict(_) => "predict",
            Self::Mc(_) => "mc",
            Self::Compare(_) => "compare",
            Self::EntropySweep(_) => "entropy-sweep",
        }
    }
}

#[derive(Debug, Args)]
pub struct WgArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentModel {
    /// Unnormalized Wishart `W = GG*`, `G` of shape `n × k`.
    Wishart,
    Single,
    RankR,
    /// Input with macroscopic spectrum given by `--input-moments`.
    Macroscopic,
    BiIndep,
    BiConj,
    Qzq,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_enum)]
    pub model: MomentModel,
    /// Highest order.
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub r: Option<u64>,
    /// JSON array of input moments `m_1, m_2, ..` (numbers or "a/b" strings).
    #[arg(long)]
    pub input_moments: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FreeprobCommand {
    /// Moments of the free Poisson law with rate `c`.
    Mp(MpArgs),
    /// Moment/free cumulant conversion of a JSON array.
    Transform(TransformArgs),
}

#[derive(Debug, Args)]
pub struct MpArgs {
    /// Rate, a decimal or "a/b"; fractions give exact output.
    #[arg(long)]
    pub c: String,
    #[arg(long)]
    pub p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToCumulants,
    ToMoments,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// JSON array of numbers or "a/b" strings.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Direction::ToCumulants)]
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictModel {
    Single,
    RankR,
    Macroscopic,
    BiIndep,
    BiConj,
    Bell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    pub model: PredictModel,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub r: Option<u64>,
    /// Number of limit moments to tabulate.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub input_moments: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McModelArg {
    Single,
    Wishart,
    BiIndep,
    BiConj,
    Qzq,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub model: McModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Statistics: `moment:P`, `scaled:P@S`, `entropy`, `eigenvalue:I`, or
    /// `spectrum` alone for every eigenvalue of every sample.
    #[arg(long, value_delimiter = ',', default_value = "moment:2")]
    pub stat: Vec<String>,
    /// One row per sample instead of aggregated means.
    #[arg(long)]
    pub per_sample: bool,
    /// Also write every sampled spectrum to this CSV file.
    #[arg(long)]
    pub dump_spectrum: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareModel {
    Single,
    BiIndep,
    BiConj,
    Qzq,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub model: CompareModel,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Highest moment order.
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Allowed distance between exact value and MC mean, in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModel {
    Single,
    BiIndep,
    BiConj,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: SweepModel,
    /// Output dimensions `n`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Environment ratio; `k = round(c n)`.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = match config::parse(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(config::ParseError::Clap(e)) => e.exit(),
        Err(config::ParseError::Config(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
