//! Confusion-matrix accounting and the derived detection scores, with the
//! ddos class as positive. Ratios whose denominator is zero are reported
//! as undefined rather than silently collapsing to 0, so that model
//! rankings cannot be skewed by degenerate predictions.

use crate::cnn::Hyper;
use crate::error::{Error, Result};
use crate::flow::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub true_pos: u64,
    pub true_neg: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }
}

/// The five scores; `None` marks an undefined ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub confusion: Confusion,
    pub acc: f64,
    pub fpr: Option<f64>,
    pub ppv: Option<f64>,
    pub tpr: Option<f64>,
    pub f1: Option<f64>,
}

/// Tallies predictions against ground truth. Both slices must have equal
/// length and contain only benign/ddos labels.
pub fn confusion(predictions: &[Label], labels: &[Label]) -> Result<Confusion> {
    if predictions.len() != labels.len() {
        return Err(Error::config(format!(
            "prediction/label length mismatch: {} vs {}",
            predictions.len(),
            labels.len()
        )));
    }
    let mut c = Confusion::default();
    for (pred, truth) in predictions.iter().zip(labels) {
        let pred_pos = match pred {
            Label::Ddos => true,
            Label::Benign => false,
            Label::Unlabeled => {
                return Err(Error::config("predictions must be benign or ddos"));
            }
        };
        let truth_pos = match truth {
            Label::Ddos => true,
            Label::Benign => false,
            Label::Unlabeled => {
                return Err(Error::config("labels must be benign or ddos"));
            }
        };
        match (pred_pos, truth_pos) {
            (true, true) => c.true_pos += 1,
            (false, false) => c.true_neg += 1,
            (true, false) => c.false_pos += 1,
            (false, true) => c.false_neg += 1,
        }
    }
    Ok(c)
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn harmonic_f1(ppv: f64, tpr: f64) -> f64 {
    if ppv + tpr == 0.0 {
        0.0
    } else {
        2.0 * ppv * tpr / (ppv + tpr)
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    if den == 0 {
        None
    } else {
        Some(num as f64 / den as f64)
    }
}

/// Evaluates accuracy, false-positive rate, precision, recall and F1 from
/// a confusion matrix.
pub fn metrics(c: &Confusion) -> Result<MetricsReport> {
    let total = c.total();
    if total == 0 {
        return Err(Error::config("cannot compute metrics over zero samples"));
    }
    let acc = (c.true_pos + c.true_neg) as f64 / total as f64;
    let fpr = ratio(c.false_pos, c.false_pos + c.true_neg);
    let ppv = ratio(c.true_pos, c.true_pos + c.false_pos);
    let tpr = ratio(c.true_pos, c.true_pos + c.false_neg);
    let f1 = match (ppv, tpr) {
        (Some(p), Some(r)) => Some(harmonic_f1(p, r)),
        _ => None,
    };
    Ok(MetricsReport {
        confusion: *c,
        acc,
        fpr,
        ppv,
        tpr,
        f1,
    })
}

pub const METRICS_CSV_HEADER: &str = "dataset,n,t,k,h,m,acc,fpr,ppv,tpr,f1";

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.6}"),
        None => "undefined".to_string(),
    }
}

impl MetricsReport {
    /// One CSV row matching [`METRICS_CSV_HEADER`].
    pub fn csv_row(&self, dataset: &str, hyper: &Hyper, t: f64) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{},{},{},{}",
            dataset,
            hyper.n,
            t,
            hyper.k,
            hyper.h,
            hyper.m,
            self.acc,
            fmt_opt(self.fpr),
            fmt_opt(self.ppv),
            fmt_opt(self.tpr),
            fmt_opt(self.f1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perfect_two_sample_case() {
        let preds = [Label::Ddos, Label::Benign];
        let labels = [Label::Ddos, Label::Benign];
        let c = confusion(&preds, &labels).unwrap();
        assert_eq!(
            c,
            Confusion { true_pos: 1, true_neg: 1, false_pos: 0, false_neg: 0 }
        );
        let m = metrics(&c).unwrap();
        assert_eq!(m.acc, 1.0);
        assert_eq!(m.fpr, Some(0.0));
        assert_eq!(m.ppv, Some(1.0));
        assert_eq!(m.tpr, Some(1.0));
        assert_eq!(m.f1, Some(1.0));
    }

    #[test]
    fn false_positive_is_counted() {
        let c = confusion(&[Label::Ddos], &[Label::Benign]).unwrap();
        assert_eq!(c.false_pos, 1);
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(confusion(&[Label::Ddos], &[]).is_err());
    }

    #[test]
    fn random_pairs_match_independent_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let to_label = |b: bool| if b { Label::Ddos } else { Label::Benign };
        let preds: Vec<Label> = (0..1000).map(|_| to_label(rng.random())).collect();
        let labels: Vec<Label> = (0..1000).map(|_| to_label(rng.random())).collect();
        let c = confusion(&preds, &labels).unwrap();

        // Brute-force recount straight from the definitions.
        let count = |p: Label, l: Label| {
            preds
                .iter()
                .zip(&labels)
                .filter(|(a, b)| **a == p && **b == l)
                .count() as u64
        };
        assert_eq!(c.true_pos, count(Label::Ddos, Label::Ddos));
        assert_eq!(c.true_neg, count(Label::Benign, Label::Benign));
        assert_eq!(c.false_pos, count(Label::Ddos, Label::Benign));
        assert_eq!(c.false_neg, count(Label::Benign, Label::Ddos));
        assert_eq!(c.total(), 1000);
    }

    #[test]
    fn f1_matches_hand_computed_harmonic_mean() {
        // PPV 0.9827 and TPR 0.9952 give F1 about 0.9889.
        let f1 = harmonic_f1(0.9827, 0.9952);
        assert!((f1 - 0.9889).abs() < 5e-4, "f1 = {f1}");
    }

    #[test]
    fn all_negative_predictions_leave_ppv_undefined() {
        let c = Confusion { true_pos: 0, true_neg: 10, false_pos: 0, false_neg: 0 };
        let m = metrics(&c).unwrap();
        assert_eq!(m.ppv, None);
        assert_eq!(m.fpr, Some(0.0));
        assert_eq!(m.acc, 1.0);
        assert_eq!(m.tpr, None); // no positive labels at all
        assert_eq!(m.f1, None);
    }

    #[test]
    fn zero_total_is_an_error() {
        assert!(metrics(&Confusion::default()).is_err());
    }

    #[test]
    fn swapping_preds_and_labels_transposes_fp_fn() {
        let preds = [Label::Ddos, Label::Benign, Label::Ddos, Label::Benign];
        let labels = [Label::Benign, Label::Ddos, Label::Ddos, Label::Benign];
        let a = confusion(&preds, &labels).unwrap();
        let b = confusion(&labels, &preds).unwrap();
        assert_eq!(a.false_pos, b.false_neg);
        assert_eq!(a.false_neg, b.false_pos);
        assert_eq!(a.true_pos, b.true_pos);
        let ma = metrics(&a).unwrap();
        let mb = metrics(&b).unwrap();
        assert_eq!(ma.acc, mb.acc);
    }

    #[test]
    fn f1_bounded_by_geometric_and_arithmetic_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p: f64 = rng.random();
            let r: f64 = rng.random();
            let f1 = harmonic_f1(p, r);
            let geo = (p * r).sqrt();
            let ari = (p + r) / 2.0;
            assert!(f1 <= geo + 1e-12);
            assert!(geo <= ari + 1e-12);
        }
        assert_eq!(harmonic_f1(1.0, 1.0), 1.0);
        assert!(harmonic_f1(1.0, 0.999) < 1.0);
        assert_eq!(harmonic_f1(0.0, 0.0), 0.0);
    }

    #[test]
    fn csv_row_layout() {
        let c = Confusion { true_pos: 1, true_neg: 1, false_pos: 0, false_neg: 0 };
        let m = metrics(&c).unwrap();
        let hyper = Hyper { n: 100, f: 11, h: 3, k: 64, m: 98 };
        let row = m.csv_row("unit", &hyper, 100.0);
        assert_eq!(row, "unit,100,100,64,3,98,1.000000,0.000000,1.000000,1.000000,1.000000");
        assert_eq!(METRICS_CSV_HEADER.split(',').count(), row.split(',').count());
    }
}
