//! Adam parameter updates with bias-corrected first and second moments.

use crate::cnn::grad::Gradients;
use crate::cnn::model::{Hyper, ModelParams};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            alpha: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Running first/second moment estimates and the step counter.
#[derive(Debug, Clone)]
pub struct AdamState<F: Scalar> {
    m: Gradients<F>,
    v: Gradients<F>,
    step: u64,
}

impl<F: Scalar> AdamState<F> {
    pub fn new(hyper: &Hyper) -> Self {
        AdamState {
            m: Gradients::zeros(hyper),
            v: Gradients::zeros(hyper),
            step: 0,
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// One update:
    /// `m <- b1*m + (1-b1)*g`, `v <- b2*v + (1-b2)*g^2`, then
    /// `p <- p - alpha * m_hat / (sqrt(v_hat) + eps)` with the usual
    /// `1 - beta^t` bias corrections.
    pub fn step(&mut self, params: &mut ModelParams<F>, grads: &Gradients<F>, cfg: &AdamConfig) {
        self.step += 1;
        let t = self.step as i32;
        let alpha = F::from_f64(cfg.alpha);
        let beta1 = F::from_f64(cfg.beta1);
        let beta2 = F::from_f64(cfg.beta2);
        let eps = F::from_f64(cfg.epsilon);
        let corr1 = F::from_f64(1.0 - cfg.beta1.powi(t));
        let corr2 = F::from_f64(1.0 - cfg.beta2.powi(t));
        let one = F::ONE;

        let update = |p: &mut F, g: F, m: &mut F, v: &mut F| {
            *m = beta1 * *m + (one - beta1) * g;
            *v = beta2 * *v + (one - beta2) * g * g;
            let m_hat = *m / corr1;
            let v_hat = *v / corr2;
            *p -= alpha * m_hat / (v_hat.sqrt() + eps);
        };

        for i in 0..params.conv_w.len() {
            update(&mut params.conv_w[i], grads.conv_w[i], &mut self.m.conv_w[i], &mut self.v.conv_w[i]);
        }
        for i in 0..params.conv_b.len() {
            update(&mut params.conv_b[i], grads.conv_b[i], &mut self.m.conv_b[i], &mut self.v.conv_b[i]);
        }
        for i in 0..params.dense_w.len() {
            update(&mut params.dense_w[i], grads.dense_w[i], &mut self.m.dense_w[i], &mut self.v.dense_w[i]);
        }
        update(&mut params.dense_b, grads.dense_b, &mut self.m.dense_b, &mut self.v.dense_b);
    }
}
