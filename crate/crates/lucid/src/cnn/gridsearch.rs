//! Hyper-parameter grid search ranked by validation F1.
//!
//! Each (t, n) pair needs a preprocessed dataset pair named
//! `t{t}-n{n}-train.lucd` / `t{t}-n{n}-val.lucd` under the data root;
//! points without data, or with inconsistent shapes, come back as error
//! rows instead of aborting the sweep. Test files are never read.

use std::path::{Path, PathBuf};

use crate::cnn::model::{classify, Hyper};
use crate::cnn::train::{train, Examples, TrainConfig};
use crate::flow::{Dataset, Label};
use crate::metrics::{confusion, metrics};

/// One grid point; `m = None` means global pooling (`n - h + 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: u32,
    pub t: f64,
    pub k: u32,
    pub h: u32,
    pub m: Option<u32>,
}

impl GridPoint {
    pub fn pool(&self) -> u32 {
        self.m.unwrap_or_else(|| Hyper::global_pool(self.n, self.h))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridScore {
    pub param_count: usize,
    pub best_epoch: usize,
    pub val_loss: f64,
    pub val_f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub point: GridPoint,
    pub result: std::result::Result<GridScore, String>,
}

/// Dataset path convention used by the sweep.
pub fn dataset_path(root: &Path, t: f64, n: u32, split: &str) -> PathBuf {
    root.join(format!("t{t}-n{n}-{split}.lucd"))
}

fn run_point(point: &GridPoint, root: &Path, base: &TrainConfig) -> Result<GridScore, String> {
    let train_path = dataset_path(root, point.t, point.n, "train");
    let val_path = dataset_path(root, point.t, point.n, "val");
    for p in [&train_path, &val_path] {
        if !p.exists() {
            return Err(format!("missing dataset {}", p.display()));
        }
    }
    let train_ds = Dataset::read(&train_path).map_err(|e| e.to_string())?;
    let val_ds = Dataset::read(&val_path).map_err(|e| e.to_string())?;
    if train_ds.n != point.n {
        return Err(format!(
            "dataset {} has n={}, grid point wants n={}",
            train_path.display(),
            train_ds.n,
            point.n
        ));
    }
    let cfg = TrainConfig {
        filters: point.k,
        filter_height: point.h,
        pool: Some(point.pool()),
        ..base.clone()
    };
    let train_ex = Examples::<f32>::from_dataset(&train_ds).map_err(|e| e.to_string())?;
    let val_ex = Examples::<f32>::from_dataset(&val_ds).map_err(|e| e.to_string())?;
    let (model, history) = train(&train_ex, &val_ex, &cfg).map_err(|e| e.to_string())?;

    // Rank by the F1 of the returned (best-loss) weights on validation.
    let probs = model.predict(&val_ex.xs).map_err(|e| e.to_string())?;
    let preds: Vec<Label> = probs.iter().map(|p| classify(*p)).collect();
    let truth: Vec<Label> = val_ex
        .ys
        .iter()
        .map(|y| if *y == 1 { Label::Ddos } else { Label::Benign })
        .collect();
    let c = confusion(&preds, &truth).map_err(|e| e.to_string())?;
    let report = metrics(&c).map_err(|e| e.to_string())?;

    Ok(GridScore {
        param_count: model.param_count(),
        best_epoch: history.best_epoch,
        val_loss: history.epochs[history.best_epoch].val_loss,
        val_f1: report.f1,
    })
}

/// Trains one model per grid point and returns outcomes sorted by
/// validation F1 (best first, error rows last).
pub fn grid_search(points: &[GridPoint], data_root: &Path, base: &TrainConfig) -> Vec<GridOutcome> {
    let mut outcomes: Vec<GridOutcome> = points
        .iter()
        .map(|point| GridOutcome {
            point: *point,
            result: run_point(point, data_root, base),
        })
        .collect();
    outcomes.sort_by(|a, b| {
        let score = |o: &GridOutcome| match &o.result {
            Ok(s) => s.val_f1.unwrap_or(-1.0),
            Err(_) => -2.0,
        };
        score(b).partial_cmp(&score(a)).unwrap()
    });
    outcomes
}
