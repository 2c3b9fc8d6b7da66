//! Feature attribution by kernel activation.
//!
//! The classifier head is set aside and ddos samples are pushed through the
//! convolutional layer alone. At every sliding position whose total
//! pre-ReLU activation is positive, each feature column is credited with
//! its own partial sum of the dot product (clipped below at zero). Credits
//! are summed over positions, kernels and flows, averaged per flow, and
//! the features are ranked by that total: the columns a trained model
//! responds to most strongly rank first.

use crate::cnn::ModelParams;
use crate::error::{Error, Result};
use crate::pcap::{FEATURE_COUNT, FEATURE_NAMES};
use crate::scalar::Scalar;

/// Features ranked by total attributed activation, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub entries: Vec<(String, f64)>,
}

impl FeatureRanking {
    /// Two-column CSV, one row per feature.
    pub fn csv(&self) -> String {
        let mut out = String::from("feature,activation\n");
        for (name, value) in &self.entries {
            out.push_str(&format!("{name},{value:.5}\n"));
        }
        out
    }

    /// Aligned two-column text table.
    pub fn table(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|(n, _)| n.len())
            .max()
            .unwrap_or(0)
            .max("feature".len());
        let mut out = format!("{:<width$}  {}\n", "feature", "activation");
        for (name, value) in &self.entries {
            out.push_str(&format!("{name:<width$}  {value:.5}\n"));
        }
        out
    }
}

/// Ranks the feature columns by the convolutional activation they
/// contribute over a set of ddos sample matrices.
pub fn attribute<F: Scalar>(model: &ModelParams<F>, flows: &[Vec<F>]) -> Result<FeatureRanking> {
    if flows.is_empty() {
        return Err(Error::config("attribution needs at least one ddos sample"));
    }
    if model.hyper.f as usize != FEATURE_COUNT {
        return Err(Error::config(format!(
            "attribution expects {FEATURE_COUNT} features, model has {}",
            model.hyper.f
        )));
    }
    let h = model.hyper.h as usize;
    let f = model.hyper.f as usize;
    let k = model.hyper.k as usize;
    let conv_len = model.hyper.conv_len();
    let expected = (model.hyper.n * model.hyper.f) as usize;

    let mut totals = [0f64; FEATURE_COUNT];
    for x in flows {
        if x.len() != expected {
            return Err(Error::config(format!(
                "sample has {} values, model expects {expected}",
                x.len()
            )));
        }
        for kk in 0..k {
            let w = &model.conv_w[kk * h * f..(kk + 1) * h * f];
            let bias = model.conv_b[kk].to_f64();
            for i in 0..conv_len {
                let mut column = [0f64; FEATURE_COUNT];
                let mut pre = bias;
                for r in 0..h {
                    let xrow = &x[(i + r) * f..(i + r + 1) * f];
                    let wrow = &w[r * f..(r + 1) * f];
                    for c in 0..f {
                        let part = wrow[c].to_f64() * xrow[c].to_f64();
                        column[c] += part;
                        pre += part;
                    }
                }
                if pre > 0.0 {
                    for c in 0..f {
                        totals[c] += column[c].max(0.0);
                    }
                }
            }
        }
    }

    let flow_count = flows.len() as f64;
    let mut entries: Vec<(String, f64)> = FEATURE_NAMES
        .iter()
        .zip(totals.iter())
        .map(|(name, total)| (name.to_string(), total / flow_count))
        .collect();
    // Descending by activation; feature order breaks exact ties.
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok(FeatureRanking { entries })
}
