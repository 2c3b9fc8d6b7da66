//! Exact gradients of the batch cross-entropy with respect to every
//! parameter, derived by the chain rule through the sigmoid, the dense
//! unit, max-pool argmax routing, the ReLU mask and the convolution.

use crate::cnn::model::{ForwardCache, Hyper, ModelParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Same shapes as [`ModelParams`], holding per-parameter gradients or
/// optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<F: Scalar> {
    pub conv_w: Vec<F>,
    pub conv_b: Vec<F>,
    pub dense_w: Vec<F>,
    pub dense_b: F,
}

impl<F: Scalar> Gradients<F> {
    pub fn zeros(hyper: &Hyper) -> Self {
        Gradients {
            conv_w: vec![F::ZERO; hyper.k as usize * (hyper.h * hyper.f) as usize],
            conv_b: vec![F::ZERO; hyper.k as usize],
            dense_w: vec![F::ZERO; hyper.dense_inputs()],
            dense_b: F::ZERO,
        }
    }
}

/// Batch-averaged gradients from forward caches of the same batch.
///
/// For each sample the loss gradient at the logit is `(p - y) / batch`;
/// pooling routes gradient only to each window's argmax position, and the
/// ReLU mask zeroes positions whose pre-activation was not positive.
pub fn backward<F: Scalar>(
    model: &ModelParams<F>,
    inputs: &[&[F]],
    labels: &[u8],
    caches: &[ForwardCache<F>],
) -> Result<Gradients<F>> {
    if inputs.is_empty() {
        return Err(Error::config("backward over an empty batch"));
    }
    if inputs.len() != labels.len() || inputs.len() != caches.len() {
        return Err(Error::config("backward batch length mismatch"));
    }
    let hyper = &model.hyper;
    let h = hyper.h as usize;
    let f = hyper.f as usize;
    let conv_len = hyper.conv_len();
    let pooled_len = hyper.pooled_len();
    let batch = F::from_f64(inputs.len() as f64);

    let mut grads = Gradients::zeros(hyper);
    for ((x, y), cache) in inputs.iter().zip(labels).zip(caches) {
        let target = match y {
            0 => F::ZERO,
            1 => F::ONE,
            other => {
                return Err(Error::config(format!("label must be 0 or 1, got {other}")));
            }
        };
        let dlogit = (cache.prob - target) / batch;
        grads.dense_b += dlogit;

        for (idx, pooled) in cache.pooled.iter().enumerate() {
            grads.dense_w[idx] += dlogit * *pooled;
            let kk = idx / pooled_len;
            let i = cache.argmax[idx] as usize;
            // ReLU gate at the selected position.
            if cache.pre_act[kk * conv_len + i] > F::ZERO {
                let dpre = dlogit * model.dense_w[idx];
                grads.conv_b[kk] += dpre;
                let wbase = kk * h * f;
                for r in 0..h {
                    let xrow = &x[(i + r) * f..(i + r + 1) * f];
                    let grow = &mut grads.conv_w[wbase + r * f..wbase + (r + 1) * f];
                    for c in 0..f {
                        grow[c] += dpre * xrow[c];
                    }
                }
            }
        }
    }
    Ok(grads)
}
