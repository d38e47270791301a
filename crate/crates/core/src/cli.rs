//! The `chaoscomp` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::classifier::{fit, ChaosCompModel, TrainConfig};
use crate::coder::{baker_entropy, model_entropy};
use crate::error::{Error, Result};
use crate::io::{
    decision_boundary_grid, generate_synthetic, load_csv, load_model, read_feature_rows,
    save_model, write_boundary_csv, write_csv, Bounds, SyntheticKind, SyntheticSpec,
};
use crate::pipeline::{
    cap_per_class, compute_metrics, grid_search, train_test_split, Dataset, HyperGrid, Metrics,
};
use crate::symbolic::BakerParams;

#[derive(Debug, Parser)]
#[command(
    name = "chaoscomp",
    version,
    about = "Classify by shortest back-iteration code under per-class chaotic maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model with fixed hyperparameters, save it and print metrics.
    Train(TrainArgs),
    /// Grid-search threshold and word length by cross-validation, then fit
    /// the best model on the training split.
    Tune(TuneArgs),
    /// Score a saved model on a labelled CSV and print metrics as JSON.
    Evaluate(EvaluateArgs),
    /// Per-row predicted labels and per-class code lengths.
    Predict(PredictArgs),
    /// Write a synthetic dataset as CSV.
    Synth(SynthArgs),
    /// Classify a lattice over two raw features and write it as CSV.
    Boundary(BoundaryArgs),
    /// Per-class entropy of a saved model's word distributions.
    Entropy(EntropyArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the label column (default: last column).
    #[arg(long = "label-col")]
    pub label_col: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Word length.
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Binarization threshold in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Laplace smoothing constant.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Symbol used to pad bit strings to a multiple of n.
    #[arg(long = "pad-symbol", default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub pad_symbol: u8,
    /// Skip the sum-of-squares feature.
    #[arg(long = "no-augment")]
    pub no_augment: bool,
}

impl ModelArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            n: self.n,
            threshold: self.threshold,
            alpha: self.alpha,
            pad_symbol: self.pad_symbol,
            augment: !self.no_augment,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Hold out this fraction for testing (default: train on everything).
    #[arg(long = "test-fraction")]
    pub test_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u32,
    /// Keep at most this many training rows per class.
    #[arg(long = "cap-per-class")]
    pub cap_per_class: Option<usize>,
    /// Model file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long = "test-fraction", default_value_t = 0.2)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u32,
    /// Comma-separated thresholds (default: 0.01 to 1.00 in steps of 0.01).
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// Comma-separated word lengths.
    #[arg(long = "n-values", value_delimiter = ',', default_value = "1,2,3,4")]
    pub n_values: Vec<u32>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long = "pad-symbol", default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub pad_symbol: u8,
    #[arg(long = "no-augment")]
    pub no_augment: bool,
    #[arg(long = "cap-per-class")]
    pub cap_per_class: Option<usize>,
    /// Worker threads for the grid search.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Where to write the cross-validation table.
    #[arg(long = "cv-out")]
    pub cv_out: Option<PathBuf>,
    /// Where to write the held-out test rows.
    #[arg(long = "test-out")]
    pub test_out: Option<PathBuf>,
    /// Model file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Also write the metrics JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV of feature rows; a trailing label column is ignored.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long = "label-col")]
    pub label_col: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// circles, moons, linear, xor, nand or nor.
    #[arg(long)]
    pub kind: String,
    /// Total samples, split evenly over the two classes (gates ignore it).
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Standard deviation of the Gaussian noise per coordinate.
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub ymin: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub ymax: f64,
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub model: PathBuf,
}

/// Parse `argv` and run the selected command. Returns the process exit
/// code: 0 on success, 2 on usage errors, 1 on any other failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Train(args) => cmd_train(args),
        Command::Tune(args) => cmd_tune(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Boundary(args) => cmd_boundary(args),
        Command::Entropy(args) => cmd_entropy(args),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Write to `path`, or to stdout when absent.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn evaluate(model: &ChaosCompModel, ds: &Dataset) -> Result<Metrics> {
    let ds = ds.with_class_order(model.class_names())?;
    let pred = model.predict_labels(ds.x())?;
    compute_metrics(ds.y(), &pred, model.n_classes())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let ds = load_csv(&args.data.data, args.data.label_col.as_deref())?;
    let (train_ds, test_ds) = match args.test_fraction {
        Some(f) => {
            let (train, test) = train_test_split(&ds, f, args.seed)?;
            (train, Some(test))
        }
        None => (ds, None),
    };
    let train_ds = match args.cap_per_class {
        Some(cap) => cap_per_class(&train_ds, cap),
        None => train_ds,
    };
    let model = fit(&train_ds, args.model.config())?;
    if let Some(path) = &args.out {
        save_model(&model, path)?;
    }
    let train_metrics = evaluate(&model, &train_ds)?;
    let test_metrics = test_ds.as_ref().map(|t| evaluate(&model, t)).transpose()?;
    let report = json!({
        "n": model.config().n,
        "threshold": model.config().threshold,
        "alpha": model.config().alpha,
        "augment": model.preprocessor().augment(),
        "train_counts": train_ds.class_counts(),
        "test_counts": test_ds.as_ref().map(Dataset::class_counts),
        "train_metrics": train_metrics,
        "test_metrics": test_metrics,
    });
    emit(None, &to_json(&report)?)
}

fn cmd_tune(args: TuneArgs) -> Result<()> {
    let ds = load_csv(&args.data.data, args.data.label_col.as_deref())?;
    let (train_ds, test_ds) = train_test_split(&ds, args.test_fraction, args.seed)?;
    let train_ds = match args.cap_per_class {
        Some(cap) => cap_per_class(&train_ds, cap),
        None => train_ds,
    };
    let grid = HyperGrid {
        thresholds: args
            .thresholds
            .unwrap_or_else(|| HyperGrid::default().thresholds),
        n_values: args.n_values,
        alpha: args.alpha,
        folds: args.folds,
    };
    let base = TrainConfig {
        alpha: args.alpha,
        pad_symbol: args.pad_symbol,
        augment: !args.no_augment,
        ..TrainConfig::default()
    };
    let result = grid_search(&train_ds, &grid, base, args.seed, args.jobs)?;
    if let Some(path) = &args.cv_out {
        let mut buf = Vec::new();
        result.table.write_csv(&mut buf)?;
        fs::write(path, buf).map_err(|e| Error::io(path, e))?;
    }
    if let Some(path) = &args.test_out {
        let mut buf = Vec::new();
        write_csv(&test_ds, &mut buf)?;
        fs::write(path, buf).map_err(|e| Error::io(path, e))?;
    }
    let model = fit(&train_ds, result.best_config(base))?;
    if let Some(path) = &args.out {
        save_model(&model, path)?;
    }
    let test_metrics = evaluate(&model, &test_ds)?;
    let report = json!({
        "best_threshold": result.best_threshold,
        "best_n": result.best_n,
        "best_cv_macro_f1": result.best_score,
        "train_counts": train_ds.class_counts(),
        "test_counts": test_ds.class_counts(),
        "test_metrics": test_metrics,
    });
    emit(None, &to_json(&report)?)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let ds = load_csv(&args.data.data, args.data.label_col.as_deref())?;
    let text = to_json(&evaluate(&model, &ds)?)?;
    if let Some(path) = &args.out {
        write_text(path, &text)?;
    }
    emit(None, &text)
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let rows = read_feature_rows(
        &args.data,
        model.preprocessor().raw_features(),
        args.label_col.as_deref(),
    )?;
    let preds = model.predict_batch(&rows)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["row".to_string(), "label".to_string()];
    header.extend(model.class_names().iter().map(|c| format!("bits_{c}")));
    header.push("tie_broken".into());
    w.write_record(&header)?;
    for (i, p) in preds.iter().enumerate() {
        let mut record = vec![i.to_string(), model.class_names()[p.label].clone()];
        record.extend(p.per_class_bits.iter().map(u64::to_string));
        record.push(p.tie_broken.to_string());
        w.write_record(&record)?;
    }
    let buf = w
        .into_inner()
        .map_err(|e| Error::io("<predictions>", e.into_error()))?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        kind: args.kind.parse::<SyntheticKind>()?,
        samples: args.samples,
        noise: args.noise,
        seed: args.seed,
    };
    let ds = generate_synthetic(&spec)?;
    let mut buf = Vec::new();
    write_csv(&ds, &mut buf)?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn cmd_boundary(args: BoundaryArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let bounds = Bounds {
        xmin: args.xmin,
        xmax: args.xmax,
        ymin: args.ymin,
        ymax: args.ymax,
    };
    let points = decision_boundary_grid(&model, bounds, args.resolution)?;
    let mut buf = Vec::new();
    write_boundary_csv(&points, &mut buf)?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn cmd_entropy(args: EntropyArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let n = model.config().n;
    let classes = model
        .class_names()
        .iter()
        .zip(model.classes())
        .map(|(name, c)| {
            let h = model_entropy(c.map());
            let baker = if n == 1 {
                Some(baker_entropy(BakerParams::new(c.probs()[0])?))
            } else {
                None
            };
            Ok(json!({
                "class": name,
                "entropy_bits": h,
                "entropy_bits_per_symbol": h / f64::from(n),
                "baker_entropy_bits": baker,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    emit(None, &to_json(&json!({ "n": n, "classes": classes }))?)
}
