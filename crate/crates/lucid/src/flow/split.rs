//! Per-flow dataset split and class balancing.
//!
//! Both operations act at flow granularity: every sample of a flow lands in
//! the same split, and balancing keeps or drops whole flows, so no flow's
//! windows ever straddle train and test.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flow::key::FlowKey;
use crate::flow::sample::{FlowSample, Label};

/// Fractions of flows for each split; must sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitRatios {
    /// 81/9/10: nine tenths for training with a tenth of that held out for
    /// validation, and a tenth of the whole for testing.
    pub const DEFAULT: SplitRatios = SplitRatios {
        train: 0.81,
        val: 0.09,
        test: 0.10,
    };

    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::config("split ratios must lie in [0, 1]"));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("split ratios must sum to 1, got {sum}")));
        }
        Ok(())
    }
}

fn distinct_keys(samples: &[FlowSample]) -> Vec<FlowKey> {
    let mut keys: Vec<FlowKey> = samples.iter().map(|s| s.key).collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Splits samples into (train, val, test) by flow.
///
/// Flow keys are shuffled with a seeded generator and assigned in blocks;
/// block sizes are the rounded ratio shares, so proportions hold to within
/// one flow. Relative sample order is preserved inside each split.
pub fn split_dataset(
    samples: Vec<FlowSample>,
    ratios: SplitRatios,
    seed: u64,
) -> Result<(Vec<FlowSample>, Vec<FlowSample>, Vec<FlowSample>)> {
    ratios.validate()?;
    let mut keys = distinct_keys(&samples);
    if keys.len() < 3 {
        return Err(Error::config(format!(
            "need at least 3 flows to split, got {}",
            keys.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    keys.shuffle(&mut rng);

    let total = keys.len();
    let mut n_train = (ratios.train * total as f64).round() as usize;
    let mut n_val = (ratios.val * total as f64).round() as usize;
    n_train = n_train.min(total);
    n_val = n_val.min(total - n_train);

    let mut assignment: HashMap<FlowKey, u8> = HashMap::with_capacity(total);
    for (i, key) in keys.into_iter().enumerate() {
        let split = if i < n_train {
            0
        } else if i < n_train + n_val {
            1
        } else {
            2
        };
        assignment.insert(key, split);
    }

    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut test = Vec::new();
    for sample in samples {
        match assignment[&sample.key] {
            0 => train.push(sample),
            1 => val.push(sample),
            _ => test.push(sample),
        }
    }
    Ok((train, val, test))
}

/// Equalizes class sizes by randomly down-sampling whole flows of the
/// majority class. Never oversamples.
pub fn balance(samples: Vec<FlowSample>, seed: u64) -> Result<Vec<FlowSample>> {
    let mut flow_label: BTreeMap<FlowKey, Label> = BTreeMap::new();
    for s in &samples {
        match s.label {
            Label::Unlabeled => {
                return Err(Error::config("cannot balance unlabeled samples"));
            }
            label => {
                flow_label.entry(s.key).or_insert(label);
            }
        }
    }
    let benign: Vec<FlowKey> = flow_label
        .iter()
        .filter(|(_, l)| **l == Label::Benign)
        .map(|(k, _)| *k)
        .collect();
    let ddos: Vec<FlowKey> = flow_label
        .iter()
        .filter(|(_, l)| **l == Label::Ddos)
        .map(|(k, _)| *k)
        .collect();
    if benign.is_empty() || ddos.is_empty() {
        return Err(Error::config(format!(
            "balancing needs both classes; got {} benign and {} ddos flows",
            benign.len(),
            ddos.len()
        )));
    }
    if benign.len() == ddos.len() {
        return Ok(samples);
    }

    let keep = benign.len().min(ddos.len());
    let (mut majority, minority) = if benign.len() > ddos.len() {
        (benign, ddos)
    } else {
        (ddos, benign)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    majority.shuffle(&mut rng);
    majority.truncate(keep);

    let mut kept: std::collections::HashSet<FlowKey> = majority.into_iter().collect();
    kept.extend(minority);
    Ok(samples.into_iter().filter(|s| kept.contains(&s.key)).collect())
}
