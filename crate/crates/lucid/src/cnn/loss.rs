use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Probability clamp applied inside the loss so that log(0) never occurs.
pub const BCE_EPSILON: f64 = 1e-12;

/// Mean binary cross-entropy over a batch:
/// `-(1/s) * sum(y*ln(p) + (1-y)*ln(1-p))`.
///
/// Accumulated in f64 regardless of the model's element type; labels are
/// 0 or 1.
pub fn bce_loss<F: Scalar>(probs: &[F], labels: &[u8]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::config("loss over an empty batch"));
    }
    if probs.len() != labels.len() {
        return Err(Error::config(format!(
            "loss batch mismatch: {} probabilities vs {} labels",
            probs.len(),
            labels.len()
        )));
    }
    let mut total = 0.0f64;
    for (p, y) in probs.iter().zip(labels) {
        let p = p.to_f64().clamp(BCE_EPSILON, 1.0 - BCE_EPSILON);
        total += match y {
            1 => -p.ln(),
            0 => -(1.0 - p).ln(),
            other => {
                return Err(Error::config(format!("label must be 0 or 1, got {other}")));
            }
        };
    }
    Ok(total / probs.len() as f64)
}
