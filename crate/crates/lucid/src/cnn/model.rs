//! The classifier: one convolutional layer over the sample matrix, ReLU,
//! max pooling along the packet axis, and a single sigmoid output unit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flow::Label;
use crate::scalar::Scalar;

/// Shape parameters: `n` rows and `f` features per sample, `k` filters of
/// height `h` (spanning all `f` columns), pool size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hyper {
    pub n: u32,
    pub f: u32,
    pub h: u32,
    pub k: u32,
    pub m: u32,
}

impl Hyper {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.f == 0 {
            return Err(Error::config("sample shape must be non-zero"));
        }
        if self.k == 0 {
            return Err(Error::config("filter count k must be at least 1"));
        }
        if self.h == 0 || self.h > self.n {
            return Err(Error::config(format!(
                "filter height h={} must satisfy 1 <= h <= n={}",
                self.h, self.n
            )));
        }
        let conv_len = self.n - self.h + 1;
        if self.m == 0 || self.m > conv_len {
            return Err(Error::config(format!(
                "pool size m={} must satisfy 1 <= m <= n-h+1={conv_len}",
                self.m
            )));
        }
        Ok(())
    }

    /// Positions a filter takes sliding over the rows: `n - h + 1`.
    pub fn conv_len(&self) -> usize {
        (self.n - self.h + 1) as usize
    }

    /// Pooled activations per filter; remainder positions are dropped.
    pub fn pooled_len(&self) -> usize {
        self.conv_len() / self.m as usize
    }

    /// Length of the flattened vector feeding the output unit.
    pub fn dense_inputs(&self) -> usize {
        self.k as usize * self.pooled_len()
    }

    /// Weights per filter including its bias.
    pub fn filter_params(&self) -> usize {
        (self.h * self.f) as usize + 1
    }

    /// (convolutional, dense) trainable parameter counts.
    pub fn param_split(&self) -> (usize, usize) {
        (
            self.k as usize * self.filter_params(),
            self.dense_inputs() + 1,
        )
    }

    pub fn param_count(&self) -> usize {
        let (conv, dense) = self.param_split();
        conv + dense
    }

    /// Pool size that reduces each activation map to a single value.
    pub fn global_pool(n: u32, h: u32) -> u32 {
        n - h + 1
    }
}

/// All trainable state.
///
/// `conv_w` is filter-major `[k][h][f]`, `dense_w` is filter-major
/// `[k][pooled_len]`; both row-major within a filter.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<F: Scalar> {
    pub hyper: Hyper,
    pub conv_w: Vec<F>,
    pub conv_b: Vec<F>,
    pub dense_w: Vec<F>,
    pub dense_b: F,
}

/// Intermediates kept from a forward pass for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardCache<F: Scalar> {
    /// Pre-ReLU convolution outputs, `[k][conv_len]`.
    pub pre_act: Vec<F>,
    /// Post-ReLU pooled maxima, `[k][pooled_len]`.
    pub pooled: Vec<F>,
    /// Activation-map index of each pooled maximum (first index on ties).
    pub argmax: Vec<u32>,
    pub logit: F,
    pub prob: F,
}

/// Glorot-style uniform initialisation: weights from `[-L, L]` with
/// `L = sqrt(6 / (fan_in + fan_out))` per layer, biases zero. Deterministic
/// for a given seed.
pub fn init_model<F: Scalar>(n: u32, f: u32, h: u32, k: u32, m: u32, seed: u64) -> Result<ModelParams<F>> {
    let hyper = Hyper { n, f, h, k, m };
    hyper.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |limit: f64| -> F {
        let v: f64 = rng.random::<f64>() * 2.0 * limit - limit;
        F::from_f64(v)
    };

    let receptive = (h * f) as f64;
    let conv_limit = (6.0 / (receptive + k as f64 * receptive)).sqrt();
    let conv_w: Vec<F> = (0..hyper.k as usize * (h * f) as usize)
        .map(|_| uniform(conv_limit))
        .collect();
    let conv_b = vec![F::ZERO; k as usize];

    let dense_in = hyper.dense_inputs() as f64;
    let dense_limit = (6.0 / (dense_in + 1.0)).sqrt();
    let dense_w: Vec<F> = (0..hyper.dense_inputs()).map(|_| uniform(dense_limit)).collect();

    Ok(ModelParams {
        hyper,
        conv_w,
        conv_b,
        dense_w,
        dense_b: F::ZERO,
    })
}

/// Decision rule: ddos only when the probability strictly exceeds one half.
pub fn classify<F: Scalar>(p: F) -> Label {
    if p.to_f64() > 0.5 {
        Label::Ddos
    } else {
        Label::Benign
    }
}

impl<F: Scalar> ModelParams<F> {
    pub fn param_count(&self) -> usize {
        self.hyper.param_count()
    }

    fn check_input(&self, x: &[F]) -> Result<()> {
        let expected = (self.hyper.n * self.hyper.f) as usize;
        if x.len() != expected {
            return Err(Error::config(format!(
                "input has {} values, model expects {expected}",
                x.len()
            )));
        }
        Ok(())
    }

    /// Probability that the sample is ddos.
    pub fn forward(&self, x: &[F]) -> Result<F> {
        Ok(self.forward_cached(x)?.prob)
    }

    /// Forward pass that also returns the intermediates needed to
    /// backpropagate through this sample.
    pub fn forward_cached(&self, x: &[F]) -> Result<ForwardCache<F>> {
        self.check_input(x)?;
        let h = self.hyper.h as usize;
        let f = self.hyper.f as usize;
        let k = self.hyper.k as usize;
        let m = self.hyper.m as usize;
        let conv_len = self.hyper.conv_len();
        let pooled_len = self.hyper.pooled_len();

        let mut pre_act = vec![F::ZERO; k * conv_len];
        for kk in 0..k {
            let w = &self.conv_w[kk * h * f..(kk + 1) * h * f];
            for i in 0..conv_len {
                let mut acc = self.conv_b[kk];
                for r in 0..h {
                    let xrow = &x[(i + r) * f..(i + r + 1) * f];
                    let wrow = &w[r * f..(r + 1) * f];
                    for c in 0..f {
                        acc += wrow[c] * xrow[c];
                    }
                }
                pre_act[kk * conv_len + i] = acc;
            }
        }

        let mut pooled = vec![F::ZERO; k * pooled_len];
        let mut argmax = vec![0u32; k * pooled_len];
        for kk in 0..k {
            let map = &pre_act[kk * conv_len..(kk + 1) * conv_len];
            for p in 0..pooled_len {
                let start = p * m;
                let mut best = map[start].relu();
                let mut best_i = start;
                for (offset, v) in map[start..start + m].iter().enumerate().skip(1) {
                    let act = v.relu();
                    if act > best {
                        best = act;
                        best_i = start + offset;
                    }
                }
                pooled[kk * pooled_len + p] = best;
                argmax[kk * pooled_len + p] = best_i as u32;
            }
        }

        let mut logit = self.dense_b;
        for (w, v) in self.dense_w.iter().zip(&pooled) {
            logit += *w * *v;
        }
        let prob = logit.sigmoid();
        Ok(ForwardCache {
            pre_act,
            pooled,
            argmax,
            logit,
            prob,
        })
    }

    /// Probabilities for a batch of samples.
    pub fn predict(&self, xs: &[Vec<F>]) -> Result<Vec<F>> {
        xs.iter().map(|x| self.forward(x)).collect()
    }

    /// Re-types every parameter (f32 <-> f64).
    pub fn cast<G: Scalar>(&self) -> ModelParams<G> {
        ModelParams {
            hyper: self.hyper,
            conv_w: self.conv_w.iter().map(|v| G::from_f64(v.to_f64())).collect(),
            conv_b: self.conv_b.iter().map(|v| G::from_f64(v.to_f64())).collect(),
            dense_w: self.dense_w.iter().map(|v| G::from_f64(v.to_f64())).collect(),
            dense_b: G::from_f64(self.dense_b.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_model(hyper: Hyper) -> ModelParams<f64> {
        ModelParams {
            hyper,
            conv_w: vec![0.0; hyper.k as usize * (hyper.h * hyper.f) as usize],
            conv_b: vec![0.0; hyper.k as usize],
            dense_w: vec![0.0; hyper.dense_inputs()],
            dense_b: 0.0,
        }
    }

    #[test]
    fn parameter_count_identity() {
        let standard = Hyper { n: 100, f: 11, h: 3, k: 64, m: 98 };
        assert_eq!(standard.param_count(), 2241);
        assert_eq!(standard.param_split(), (2176, 65));

        let ones = Hyper { n: 1, f: 1, h: 1, k: 1, m: 1 };
        assert_eq!(ones.param_count(), 4);

        let half = Hyper { n: 100, f: 11, h: 3, k: 32, m: 98 };
        // 32 * 34 + (32 + 1), evaluated by hand
        assert_eq!(half.param_count(), 1121);
    }

    #[test]
    fn init_reports_default_parameter_count() {
        let model = init_model::<f32>(100, 11, 3, 64, 98, 0).unwrap();
        assert_eq!(model.param_count(), 2241);
        assert_eq!(model.conv_w.len() + model.conv_b.len(), 2176);
        assert_eq!(model.dense_w.len() + 1, 65);
        assert!(model.conv_b.iter().all(|b| *b == 0.0));
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let a = init_model::<f64>(10, 11, 3, 4, 8, 42).unwrap();
        let b = init_model::<f64>(10, 11, 3, 4, 8, 42).unwrap();
        assert_eq!(a, b);
        let c = init_model::<f64>(10, 11, 3, 4, 8, 43).unwrap();
        assert_ne!(a.conv_w, c.conv_w);
    }

    #[test]
    fn invalid_shapes_are_rejected() {
        assert!(init_model::<f32>(10, 11, 11, 4, 1, 0).is_err()); // h > n
        assert!(init_model::<f32>(10, 11, 3, 0, 8, 0).is_err()); // k = 0
        assert!(init_model::<f32>(10, 11, 3, 4, 9, 0).is_err()); // m > n-h+1
        assert!(init_model::<f32>(10, 11, 0, 4, 1, 0).is_err()); // h = 0
    }

    #[test]
    fn zero_model_outputs_one_half() {
        let hyper = Hyper { n: 10, f: 11, h: 3, k: 4, m: 8 };
        let model = zero_model(hyper);
        let x = vec![0.37; 110];
        assert_eq!(model.forward(&x).unwrap(), 0.5);
    }

    #[test]
    fn unit_chain_hand_evaluation() {
        // k=1, h=1, f=1, all weights 1, biases 0, one nonzero input:
        // pooled max is 1, so p = sigmoid(1).
        let hyper = Hyper { n: 4, f: 1, h: 1, k: 1, m: 4 };
        let model = ModelParams::<f64> {
            hyper,
            conv_w: vec![1.0],
            conv_b: vec![0.0],
            dense_w: vec![1.0],
            dense_b: 0.0,
        };
        let x = vec![0.0, 1.0, 0.0, 0.0];
        let p = model.forward(&x).unwrap();
        assert!((p - 0.731_058_578_630_004_9).abs() < 1e-12);
    }

    #[test]
    fn pooling_keeps_first_max_on_ties() {
        let hyper = Hyper { n: 4, f: 1, h: 1, k: 1, m: 4 };
        let model = ModelParams::<f64> {
            hyper,
            conv_w: vec![1.0],
            conv_b: vec![0.0],
            dense_w: vec![1.0],
            dense_b: 0.0,
        };
        let cache = model.forward_cached(&[0.5, 0.9, 0.9, 0.1]).unwrap();
        assert_eq!(cache.argmax, vec![1]);
        assert_eq!(cache.pooled, vec![0.9]);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let model = init_model::<f64>(10, 11, 3, 2, 8, 0).unwrap();
        assert!(model.forward(&vec![0.0; 100]).is_err());
    }

    #[test]
    fn global_pooling_is_shift_invariant() {
        // With m = n-h+1 the output must not change when a pattern moves,
        // as long as every partial-overlap position stays inside the
        // activation map: rows h-1 ..= n-2h+1 for an h-row pattern.
        let (n, h) = (12usize, 3usize);
        let model = init_model::<f64>(n as u32, 11, h as u32, 4, Hyper::global_pool(12, 3), 5)
            .unwrap();
        let f = 11usize;
        let pattern: Vec<f64> = (0..h * f).map(|i| (i as f64 * 0.37).sin().abs()).collect();
        let place = |row: usize| {
            let mut x = vec![0.0; n * f];
            x[row * f..row * f + h * f].copy_from_slice(&pattern);
            x
        };
        let base = model.forward(&place(h - 1)).unwrap();
        for row in h - 1..=n - 2 * h + 1 {
            let p = model.forward(&place(row)).unwrap();
            assert_eq!(p, base, "pattern at row {row} changed the output");
        }
        // Near the boundary partial responses are cut off, so invariance
        // is not required there; the forward pass must still succeed.
        assert!(model.forward(&place(0)).is_ok());
    }

    #[test]
    fn pooled_activations_are_non_negative() {
        let model = init_model::<f64>(10, 11, 3, 4, 2, 9).unwrap();
        let x: Vec<f64> = (0..110).map(|i| ((i * 31 % 17) as f64 / 17.0) - 0.5).collect();
        let cache = model.forward_cached(&x).unwrap();
        assert!(cache.pooled.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn classify_uses_strict_threshold() {
        assert_eq!(classify(0.51f64), Label::Ddos);
        assert_eq!(classify(0.5f64), Label::Benign);
        assert_eq!(classify(0.49f64), Label::Benign);
    }
}
