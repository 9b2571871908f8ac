//! Command-line surface. The `anfis` binary parses [`Cli`] and calls [`run`];
//! every subcommand is also callable as a plain function.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::data::{self, Dataset};
use crate::error::{AnfisError, Result};
use crate::mf::MfFamily;
use crate::model::{AnfisModel, SugenoOrder};
use crate::train::{CheckPolicy, EtaPolicy, TrainConfig};

mod commands;

pub use commands::{
    cmd_compare_mfs, cmd_embed, cmd_evaluate, cmd_gen_mg, cmd_lr_sweep, cmd_overfit_trace, cmd_predict,
    cmd_train, parse_sweep_entry, CompareRow, OverfitReport, SweepRun, TrainReport,
};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "ANFIS_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "anfis", version, about = "Hybrid-trained neuro-fuzzy regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the Mackey-Glass delay equation and write `t,x`.
    GenMg(GenMgArgs),
    /// Turn a `t,x` series into lagged input/target rows.
    Embed(EmbedArgs),
    /// Train a model and write it with its trace and report.
    Train(TrainArgs),
    /// Predict with a saved model.
    Predict(PredictArgs),
    /// Score a saved model on labelled data.
    Evaluate(EvaluateArgs),
    /// Train every membership family at both Sugeno orders.
    CompareMfs(CompareArgs),
    /// Training curves for several learning-rate policies.
    LrSweep(SweepArgs),
    /// Long run with checking-set monitoring and no early stop.
    OverfitTrace(OverfitArgs),
}

#[derive(Debug, Args)]
pub struct GenMgArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 17.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 2000.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1.2)]
    pub x0: f64,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Non-positive lags, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-12i64, -6, 0])]
    pub lags: Vec<i64>,
    /// Steps ahead of the last lag for the target.
    #[arg(long, default_value_t = 6)]
    pub horizon: usize,
}

/// Where the data comes from and how it is divided.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub inputs: Vec<String>,
    #[arg(long)]
    pub target: String,
    /// Training fraction of a seeded shuffle.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    /// Keep only this many rows (after a seeded shuffle) before splitting.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sequential split: first N rows train (disables shuffling).
    #[arg(long, requires = "check_count")]
    pub train_count: Option<usize>,
    /// Sequential split: next M rows check.
    #[arg(long, requires = "train_count")]
    pub check_count: Option<usize>,
}

impl DataArgs {
    pub fn load(&self) -> Result<(Dataset, Dataset)> {
        let ds = data::load_csv(&self.data, &self.inputs, &self.target)?;
        if let (Some(nt), Some(nc)) = (self.train_count, self.check_count) {
            return Ok((ds.slice(0, nt)?, ds.slice(nt, nt + nc)?));
        }
        let ds = match self.limit {
            Some(limit) if limit < ds.len() => ds.shuffled(self.seed).slice(0, limit)?,
            _ => ds,
        };
        data::split(&ds, self.split, self.seed)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "gaussmf")]
    pub mf_family: MfFamily,
    #[arg(long, default_value_t = 3)]
    pub mfs_per_input: usize,
    /// Sugeno order, 0 or 1.
    #[arg(long, default_value = "1")]
    pub order: SugenoOrder,
}

impl ModelArgs {
    pub fn build(&self, train: &Dataset) -> Result<AnfisModel> {
        AnfisModel::grid(&train.input_ranges()?, self.mfs_per_input, self.mf_family, self.order)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = 0.002)]
    pub eta: f64,
    /// `fixed`, `step:FACTOR:EVERY`, `adaptive` or `adaptive:UP:DOWN`.
    #[arg(long, default_value = "fixed")]
    pub eta_policy: EtaPolicy,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub error_goal: f64,
    #[arg(long, default_value_t = 10)]
    pub check_every: usize,
    #[arg(long, default_value_t = 5)]
    pub patience: usize,
    /// Monitor the checking set without stopping early.
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long, default_value_t = 1e-4)]
    pub sigma_min_scale: f64,
}

impl FitArgs {
    pub fn config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            eta0: self.eta,
            eta_policy: self.eta_policy,
            max_epochs: self.epochs,
            error_goal: self.error_goal,
            checking: Some(CheckPolicy {
                every: self.check_every,
                patience: (!self.no_early_stop).then_some(self.patience),
            }),
            seed,
            sigma_min_scale: self.sigma_min_scale,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    #[arg(long)]
    pub out_model: Option<PathBuf>,
    #[arg(long)]
    pub out_trace: Option<PathBuf>,
    /// JSON report; printed to stdout when omitted.
    #[arg(long)]
    pub out_report: Option<PathBuf>,
    /// Parity CSV over training and checking rows combined.
    #[arg(long)]
    pub out_parity: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV whose header names every model input.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub out_report: Option<PathBuf>,
    #[arg(long)]
    pub out_parity: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 3)]
    pub mfs_per_input: usize,
    #[arg(long, default_value_t = 0.002)]
    pub eta: f64,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Entries `ETA` (fixed rate) or `POLICY@ETA`, e.g. `0.002,adaptive@0.002,step:0.8:5@0.05`.
    #[arg(long, value_delimiter = ',')]
    pub policies: Vec<String>,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OverfitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.003)]
    pub eta: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 10)]
    pub check_every: usize,
    #[arg(long)]
    pub out_trace: PathBuf,
    #[arg(long)]
    pub out_report: Option<PathBuf>,
}

/// Sizes the global worker pool from [`WORKERS_ENV`] when set.
pub fn init_workers() -> Result<()> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| AnfisError::Config(format!("{WORKERS_ENV}={raw} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| AnfisError::Config(e.to_string()))
}

pub fn run(cli: Cli) -> Result<()> {
    init_workers()?;
    match cli.command {
        Command::GenMg(a) => cmd_gen_mg(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::Train(a) => cmd_train(&a).map(drop),
        Command::Predict(a) => cmd_predict(&a),
        Command::Evaluate(a) => cmd_evaluate(&a).map(drop),
        Command::CompareMfs(a) => cmd_compare_mfs(&a).map(drop),
        Command::LrSweep(a) => cmd_lr_sweep(&a).map(drop),
        Command::OverfitTrace(a) => cmd_overfit_trace(&a).map(drop),
    }
}
