//! Mini-batch training with seeded shuffling and early stopping on the
//! validation loss. The returned parameters are those of the epoch with
//! the lowest validation loss, not the last epoch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cnn::adam::{AdamConfig, AdamState};
use crate::cnn::grad::backward;
use crate::cnn::loss::bce_loss;
use crate::cnn::model::{classify, init_model, Hyper, ModelParams};
use crate::error::{Error, Result};
use crate::flow::{Dataset, Label};
use crate::metrics::{confusion, metrics};
use crate::scalar::Scalar;

/// Everything the trainer needs to know, with the standard defaults:
/// learning rate 0.01, batch size 2048, patience 25, 64 filters of height
/// 3, global pooling.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub alpha: f64,
    pub batch_size: usize,
    /// Consecutive epochs without a validation-loss improvement before
    /// training stops.
    pub patience: u32,
    pub max_epochs: u32,
    pub seed: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Number of convolutional filters (k).
    pub filters: u32,
    /// Filter height in packets (h).
    pub filter_height: u32,
    /// Pool size (m); `None` pools each activation map to one value.
    pub pool: Option<u32>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            alpha: 0.01,
            batch_size: 2048,
            patience: 25,
            max_epochs: 1000,
            seed: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            filters: 64,
            filter_height: 3,
            pool: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::config(format!("learning rate must be positive, got {}", self.alpha)));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch size must be at least 1"));
        }
        if self.patience == 0 {
            return Err(Error::config("patience must be at least 1"));
        }
        if self.max_epochs == 0 {
            return Err(Error::config("max epochs must be at least 1"));
        }
        Ok(())
    }

    fn adam(&self) -> AdamConfig {
        AdamConfig {
            alpha: self.alpha,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }
}

/// A labelled set unpacked into model-ready matrices.
#[derive(Debug, Clone)]
pub struct Examples<F: Scalar> {
    pub n: u32,
    pub f: u32,
    pub xs: Vec<Vec<F>>,
    pub ys: Vec<u8>,
}

impl<F: Scalar> Examples<F> {
    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        let mut xs = Vec::with_capacity(ds.samples.len());
        let mut ys = Vec::with_capacity(ds.samples.len());
        for s in &ds.samples {
            let y = match s.label {
                Label::Benign => 0u8,
                Label::Ddos => 1u8,
                Label::Unlabeled => {
                    return Err(Error::config("dataset contains unlabeled samples"));
                }
            };
            xs.push(s.matrix.iter().map(|v| F::from_f32(*v)).collect());
            ys.push(y);
        }
        Ok(Examples {
            n: ds.n,
            f: ds.f(),
            xs,
            ys,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_f1: Option<f64>,
}

/// Loss/score trace of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    /// Training loss of the untrained model, for before/after comparison.
    pub initial_train_loss: f64,
    pub epochs: Vec<EpochStats>,
    /// Index into `epochs` of the lowest validation loss.
    pub best_epoch: usize,
}

impl TrainHistory {
    pub fn csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,val_loss,val_f1\n");
        out.push_str(&format!("0,{},,\n", self.initial_train_loss));
        for (i, e) in self.epochs.iter().enumerate() {
            let f1 = match e.val_f1 {
                Some(v) => v.to_string(),
                None => "undefined".to_string(),
            };
            out.push_str(&format!("{},{},{},{}\n", i + 1, e.train_loss, e.val_loss, f1));
        }
        out
    }
}

fn dataset_loss<F: Scalar>(model: &ModelParams<F>, data: &Examples<F>) -> Result<f64> {
    let probs = model.predict(&data.xs)?;
    bce_loss(&probs, &data.ys)
}

fn dataset_f1<F: Scalar>(model: &ModelParams<F>, data: &Examples<F>) -> Result<Option<f64>> {
    let probs = model.predict(&data.xs)?;
    let preds: Vec<Label> = probs.iter().map(|p| classify(*p)).collect();
    let truth: Vec<Label> = data
        .ys
        .iter()
        .map(|y| if *y == 1 { Label::Ddos } else { Label::Benign })
        .collect();
    let c = confusion(&preds, &truth)?;
    Ok(metrics(&c)?.f1)
}

/// Trains a fresh model on `train`, watching `val` for early stopping.
pub fn train<F: Scalar>(
    train: &Examples<F>,
    val: &Examples<F>,
    cfg: &TrainConfig,
) -> Result<(ModelParams<F>, TrainHistory)> {
    cfg.validate()?;
    if train.is_empty() || val.is_empty() {
        return Err(Error::config("training and validation sets must be non-empty"));
    }
    if (train.n, train.f) != (val.n, val.f) {
        return Err(Error::config(format!(
            "train/validation shape mismatch: {}x{} vs {}x{}",
            train.n, train.f, val.n, val.f
        )));
    }
    let m = cfg.pool.unwrap_or(Hyper::global_pool(train.n, cfg.filter_height));
    let mut model: ModelParams<F> =
        init_model(train.n, train.f, cfg.filter_height, cfg.filters, m, cfg.seed)?;

    let initial_train_loss = dataset_loss(&model, train)?;
    if initial_train_loss.is_nan() {
        return Err(Error::numeric("initial training loss is NaN"));
    }

    let adam_cfg = cfg.adam();
    let mut adam = AdamState::new(&model.hyper);
    // Separate stream from the init draw so shuffles are independent of
    // the weight layout.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut order: Vec<usize> = (0..train.len()).collect();

    let mut history = TrainHistory {
        initial_train_loss,
        epochs: Vec::new(),
        best_epoch: 0,
    };
    let mut best_loss = f64::INFINITY;
    let mut best_model = model.clone();
    let mut stale_epochs = 0u32;

    for epoch in 0..cfg.max_epochs as usize {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0f64;
        for chunk in order.chunks(cfg.batch_size) {
            let xs: Vec<&[F]> = chunk.iter().map(|i| train.xs[*i].as_slice()).collect();
            let ys: Vec<u8> = chunk.iter().map(|i| train.ys[*i]).collect();
            let caches: Vec<_> = xs
                .iter()
                .map(|x| model.forward_cached(x))
                .collect::<Result<_>>()?;
            let probs: Vec<F> = caches.iter().map(|c| c.prob).collect();
            let batch_loss = bce_loss(&probs, &ys)?;
            loss_sum += batch_loss * chunk.len() as f64;
            let grads = backward(&model, &xs, &ys, &caches)?;
            adam.step(&mut model, &grads, &adam_cfg);
        }
        let train_loss = loss_sum / train.len() as f64;
        let val_loss = dataset_loss(&model, val)?;
        if train_loss.is_nan() || val_loss.is_nan() {
            return Err(Error::numeric(format!(
                "loss became NaN at epoch {} (train {train_loss}, val {val_loss})",
                epoch + 1
            )));
        }
        let val_f1 = dataset_f1(&model, val)?;
        history.epochs.push(EpochStats {
            train_loss,
            val_loss,
            val_f1,
        });

        if val_loss < best_loss {
            best_loss = val_loss;
            best_model = model.clone();
            history.best_epoch = epoch;
            stale_epochs = 0;
        } else {
            stale_epochs += 1;
            if stale_epochs >= cfg.patience {
                break;
            }
        }
    }

    Ok((best_model, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tiny separable task: class 1 rows are large in the first column,
    /// class 0 rows in the second.
    fn toy_examples(count: usize, flip_labels: bool) -> Examples<f64> {
        let n = 4u32;
        let f = 3u32;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..count {
            let positive = i % 2 == 0;
            let mut x = vec![0.0f64; (n * f) as usize];
            for row in 0..n as usize {
                // deterministic jitter
                let jitter = ((i * 7 + row * 13) % 10) as f64 * 0.02;
                if positive {
                    x[row * f as usize] = 0.8 + jitter;
                } else {
                    x[row * f as usize + 1] = 0.8 + jitter;
                }
            }
            xs.push(x);
            let y = positive as u8;
            ys.push(if flip_labels { 1 - y } else { y });
        }
        Examples { n, f, xs, ys }
    }

    fn quick_config() -> TrainConfig {
        TrainConfig {
            batch_size: 16,
            patience: 5,
            max_epochs: 60,
            filters: 4,
            filter_height: 2,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn defaults_are_the_documented_settings() {
        let cfg = TrainConfig::default();
        assert_eq!(cfg.alpha, 0.01);
        assert_eq!(cfg.batch_size, 2048);
        assert_eq!(cfg.patience, 25);
        assert_eq!(cfg.filters, 64);
        assert_eq!(cfg.filter_height, 3);
        assert_eq!(cfg.pool, None);
        assert_eq!((cfg.beta1, cfg.beta2, cfg.epsilon), (0.9, 0.999, 1e-8));
    }

    #[test]
    fn learns_a_separable_toy_task() {
        let train_set = toy_examples(64, false);
        let val_set = toy_examples(32, false);
        let (model, history) = train(&train_set, &val_set, &quick_config()).unwrap();
        let f1 = dataset_f1(&model, &val_set).unwrap().unwrap();
        assert!(f1 >= 0.99, "f1 = {f1}");
        assert!(history.epochs[0].train_loss < history.initial_train_loss);
    }

    #[test]
    fn same_seed_gives_identical_history() {
        let train_set = toy_examples(32, false);
        let val_set = toy_examples(16, false);
        let cfg = quick_config();
        let (m1, h1) = train(&train_set, &val_set, &cfg).unwrap();
        let (m2, h2) = train(&train_set, &val_set, &cfg).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(m1, m2);
    }

    #[test]
    fn best_epoch_minimizes_validation_loss() {
        let train_set = toy_examples(32, false);
        let val_set = toy_examples(16, false);
        let (_, history) = train(&train_set, &val_set, &quick_config()).unwrap();
        let best = history.epochs[history.best_epoch].val_loss;
        assert!(history.epochs.iter().all(|e| e.val_loss >= best));
    }

    #[test]
    fn patience_one_with_rising_val_loss_stops_after_two_epochs() {
        // Validation labels are inverted, so every step that improves the
        // training loss strictly worsens the validation loss.
        let train_set = toy_examples(32, false);
        let val_set = toy_examples(16, true);
        let cfg = TrainConfig {
            patience: 1,
            max_epochs: 50,
            ..quick_config()
        };
        let (best_model, history) = train(&train_set, &val_set, &cfg).unwrap();
        assert_eq!(history.epochs.len(), 2);
        assert_eq!(history.best_epoch, 0);
        assert!(history.epochs[1].val_loss >= history.epochs[0].val_loss);

        // Returned weights are the epoch-1 snapshot: retraining with
        // max_epochs = 1 must reproduce them exactly.
        let one_epoch = TrainConfig { max_epochs: 1, ..cfg };
        let (after_one, _) = train(&train_set, &val_set, &one_epoch).unwrap();
        assert_eq!(best_model, after_one);
    }

    #[test]
    fn empty_sets_are_rejected() {
        let data = toy_examples(8, false);
        let empty = Examples::<f64> { n: 4, f: 3, xs: vec![], ys: vec![] };
        assert!(train(&empty, &data, &quick_config()).is_err());
        assert!(train(&data, &empty, &quick_config()).is_err());
    }

    #[test]
    fn history_csv_has_a_row_per_epoch() {
        let train_set = toy_examples(16, false);
        let val_set = toy_examples(8, false);
        let cfg = TrainConfig { max_epochs: 3, patience: 10, ..quick_config() };
        let (_, history) = train(&train_set, &val_set, &cfg).unwrap();
        let csv = history.csv();
        assert_eq!(csv.lines().count(), 1 + 1 + history.epochs.len());
        assert!(csv.starts_with("epoch,train_loss,val_loss,val_f1\n"));
    }
}
