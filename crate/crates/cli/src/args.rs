use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankcal::evaluation::TieMode;
use rankcal::sgd::LossKind;

#[derive(Debug, Parser)]
#[command(name = "rankcal", version, about = "Calibrated probabilities from pairwise ranking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a linear model and write a model file.
    Train(TrainArgs),
    /// Fit an isotonic calibration map for a trained model.
    Calibrate(CalibrateArgs),
    /// Write one probability (or score) per input row.
    Predict(PredictArgs),
    /// Report AUC, squared error and optional profit.
    Eval(EvalArgs),
    /// Run the capped-link synthetic benchmark.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Sparse,
}

/// Where the examples come from and which columns play which role.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Input file: header CSV or `<label> <index>:<value> ...` lines.
    #[arg(long)]
    pub data: PathBuf,
    /// Override format detection (`.csv` is CSV, anything else sparse).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Label column (CSV only).
    #[arg(long)]
    pub label: Option<String>,
    /// Comma-separated feature columns (CSV only; default: all others).
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainMethod {
    Logreg,
    Linreg,
    Rank,
    Crr,
}

impl TrainMethod {
    pub fn loss(self) -> LossKind {
        match self {
            TrainMethod::Logreg => LossKind::Logistic,
            TrainMethod::Linreg => LossKind::Squared,
            TrainMethod::Rank => LossKind::PairwiseLogistic,
            TrainMethod::Crr => LossKind::Crr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Standardize {
    /// Center and scale CSV input; scale sparse input without centering.
    Auto,
    None,
    Center,
    Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectBy {
    Auc,
    Mse,
    Profit,
}

#[derive(Debug, Clone, Args)]
pub struct HyperArgs {
    /// l2 regularization strength.
    #[arg(long, default_value_t = 1e-3)]
    pub lambda: f64,
    /// Initial step size.
    #[arg(long, default_value_t = 0.1)]
    pub eta0: f64,
    /// Number of SGD steps.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    /// Probability of a pairwise step for crr.
    #[arg(long, default_value_t = 0.5)]
    pub crr_alpha: f64,
    /// Seed for sampling and splits.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Standardize::Auto)]
    pub standardize: Standardize,
}

#[derive(Debug, Clone, Args)]
pub struct ProfitArgs {
    /// Column with the donation received from each example.
    #[arg(long)]
    pub donation_column: Option<String>,
    /// Cost of contacting one example. Required for profit.
    #[arg(long)]
    pub cost: Option<f64>,
    /// Gift assumed when deciding whom to contact (default: mean donation of
    /// positive examples in the fitting data).
    #[arg(long)]
    pub expected_gift: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub method: TrainMethod,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Search the default grids (lambda 1e-4..10 by decades, eta0 0.01, 0.1, 1).
    #[arg(long)]
    pub grid: bool,
    /// Comma-separated lambda grid; implies --grid.
    #[arg(long, value_delimiter = ',')]
    pub grid_lambda: Option<Vec<f64>>,
    /// Comma-separated eta0 grid; implies --grid.
    #[arg(long, value_delimiter = ',')]
    pub grid_eta0: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = SelectBy::Auc)]
    pub select_by: SelectBy,
    /// Fraction of the training rows used to score grid cells.
    #[arg(long, default_value_t = 0.2)]
    pub validation_fraction: f64,
    /// Hold out this fraction of rows for a later `calibrate`.
    #[arg(long)]
    pub reserve_calibration: Option<f64>,
    #[command(flatten)]
    pub profit: ProfitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Calibrate on every row of --data, including rows used for training.
    #[arg(long)]
    pub paper_faithful: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Also print the raw score (the only output for uncalibrated rankers).
    #[arg(long)]
    pub raw: bool,
    /// Divide probabilities by this labeling rate (positive-unlabeled data).
    #[arg(long, conflicts_with = "pu_estimate_from")]
    pub pu_c: Option<f64>,
    /// Estimate the labeling rate as the mean prediction over these
    /// labeled positives (same format as --data).
    #[arg(long)]
    pub pu_estimate_from: Option<PathBuf>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Half,
    Geq,
    Strict,
}

impl From<TieArg> for TieMode {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Half => TieMode::Half,
            TieArg::Geq => TieMode::Geq,
            TieArg::Strict => TieMode::Strict,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Model to evaluate on --data.
    #[arg(long, conflicts_with_all = ["predictions", "splits"])]
    pub model: Option<PathBuf>,
    /// File with one probability per line, aligned with --data.
    #[arg(long, conflicts_with = "splits")]
    pub predictions: Option<PathBuf>,
    /// Train and test every method on this many random splits of --data.
    #[arg(long)]
    pub splits: Option<usize>,
    /// Training share of each split.
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Comma-separated methods for --splits.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "linreg,linreg+ir,logreg,logreg+ir,crr,rank+ir"
    )]
    pub methods: Vec<String>,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[arg(long, value_enum, default_value_t = TieArg::Half)]
    pub tie_mode: TieArg,
    /// Column with the true probability of each row (CSV only).
    #[arg(long)]
    pub truth_column: Option<String>,
    #[command(flatten)]
    pub profit: ProfitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Comma-separated noise levels in [0, 0.5].
    #[arg(
        long = "a",
        value_delimiter = ',',
        default_value = "0.001953125,0.0078125,0.03125,0.125,0.5"
    )]
    pub a_values: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "linreg,linreg+ir,logreg,logreg+ir,crr,rank+ir"
    )]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 1e-3)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eta0: f64,
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub crr_alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
