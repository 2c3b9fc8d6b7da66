use std::path::PathBuf;

use lucid::cnn::{save_model, train, Examples, TrainConfig};
use lucid::flow::Dataset;
use lucid::{Error, Result};

use crate::config::{self, resolve_seed};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Training dataset.
    #[arg(long)]
    train: PathBuf,
    /// Validation dataset (early stopping and model selection).
    #[arg(long)]
    val: PathBuf,
    /// Convolutional filters.
    #[arg(long)]
    k: Option<u32>,
    /// Filter height in packets.
    #[arg(long)]
    h: Option<u32>,
    /// Pool size; defaults to global pooling (n - h + 1).
    #[arg(long)]
    m: Option<u32>,
    /// Learning rate.
    #[arg(long)]
    alpha: Option<f64>,
    /// Mini-batch size.
    #[arg(long)]
    batch: Option<usize>,
    /// Epochs without validation improvement before stopping.
    #[arg(long)]
    patience: Option<u32>,
    #[arg(long)]
    max_epochs: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output checkpoint file.
    #[arg(long)]
    out: PathBuf,
    /// History CSV path; defaults to the checkpoint path with a
    /// `history.csv` extension.
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let file_cfg = config::load(args.config.as_deref())?;
    let defaults = TrainConfig::default();
    let cfg = TrainConfig {
        alpha: args.alpha.or(file_cfg.alpha).unwrap_or(defaults.alpha),
        batch_size: args.batch.or(file_cfg.batch).unwrap_or(defaults.batch_size),
        patience: args.patience.or(file_cfg.patience).unwrap_or(defaults.patience),
        max_epochs: args
            .max_epochs
            .or(file_cfg.max_epochs)
            .unwrap_or(defaults.max_epochs),
        seed: resolve_seed(args.seed, file_cfg.seed)?,
        filters: args.k.or(file_cfg.k).unwrap_or(defaults.filters),
        filter_height: args.h.or(file_cfg.h).unwrap_or(defaults.filter_height),
        pool: args.m.or(file_cfg.m),
        ..defaults
    };
    if cfg.filters == 0 {
        return Err(Error::config("--k must be at least 1"));
    }

    let train_ds = Dataset::read(&args.train)?;
    let val_ds = Dataset::read(&args.val)?;
    if train_ds.norm != val_ds.norm {
        return Err(Error::config(
            "training and validation sets use different normalization scales",
        ));
    }
    let train_ex = Examples::<f32>::from_dataset(&train_ds)?;
    let val_ex = Examples::<f32>::from_dataset(&val_ds)?;

    let (model, history) = train(&train_ex, &val_ex, &cfg)?;
    save_model(&model, &train_ds.norm, &args.out)?;
    let history_path = args
        .history
        .unwrap_or_else(|| args.out.with_extension("history.csv"));
    std::fs::write(&history_path, history.csv())
        .map_err(|e| Error::io_path("write history", &history_path, e))?;

    let best = &history.epochs[history.best_epoch];
    let f1 = best
        .val_f1
        .map(|v| format!("{v:.4}"))
        .unwrap_or_else(|| "undefined".into());
    println!(
        "trained {} epochs; best epoch {} (val loss {:.6}, val f1 {}); {} parameters -> {}",
        history.epochs.len(),
        history.best_epoch + 1,
        best.val_loss,
        f1,
        model.param_count(),
        args.out.display()
    );
    Ok(())
}
