use std::path::PathBuf;

use lucid::cnn::{grid_search, TrainConfig};
use lucid::{Error, Result};

use crate::config::{self, resolve_seed};
use crate::grid::load_grid;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON grid definition.
    #[arg(long)]
    grid: PathBuf,
    /// Directory holding t{t}-n{n}-{train,val}.lucd datasets.
    #[arg(long)]
    data_root: PathBuf,
    /// Ranked results CSV.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let points = load_grid(&args.grid)?;
    let file_cfg = config::load(args.config.as_deref())?;
    let defaults = TrainConfig::default();
    let base = TrainConfig {
        alpha: file_cfg.alpha.unwrap_or(defaults.alpha),
        batch_size: file_cfg.batch.unwrap_or(defaults.batch_size),
        patience: file_cfg.patience.unwrap_or(defaults.patience),
        max_epochs: file_cfg.max_epochs.unwrap_or(defaults.max_epochs),
        seed: resolve_seed(args.seed, file_cfg.seed)?,
        ..defaults
    };

    eprintln!("sweeping {} grid points", points.len());
    let outcomes = grid_search(&points, &args.data_root, &base);

    let mut csv = String::from("n,t,k,h,m,param_count,best_epoch,val_loss,val_f1,status\n");
    for outcome in &outcomes {
        let p = outcome.point;
        let m = p.pool();
        match &outcome.result {
            Ok(score) => {
                let f1 = score
                    .val_f1
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "undefined".into());
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},ok\n",
                    p.n,
                    p.t,
                    p.k,
                    p.h,
                    m,
                    score.param_count,
                    score.best_epoch + 1,
                    score.val_loss,
                    f1
                ));
            }
            Err(msg) => {
                eprintln!("warning: n={} t={} k={} h={} m={m}: {msg}", p.n, p.t, p.k, p.h);
                csv.push_str(&format!(
                    "{},{},{},{},{m},,,,,error: {}\n",
                    p.n,
                    p.t,
                    p.k,
                    p.h,
                    msg.replace(',', ";")
                ));
            }
        }
    }
    std::fs::write(&args.out, &csv).map_err(|e| Error::io_path("write", &args.out, e))?;
    print!("{csv}");
    Ok(())
}
