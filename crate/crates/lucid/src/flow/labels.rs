//! Flow-level ground truth and its CSV representation.
//!
//! The label file has one row per bidirectional flow with the endpoints in
//! canonical order: `proto,ip_a,port_a,ip_b,port_b,label` where label is
//! 0 (benign) or 1 (ddos).

use std::collections::HashMap;
use std::net::Ipv4Addr;
use std::path::Path;

use crate::error::{Error, Result};
use crate::flow::key::{Endpoint, FlowKey};
use crate::flow::sample::{FlowSample, Label};

pub const LABEL_CSV_HEADER: [&str; 6] = ["proto", "ip_a", "port_a", "ip_b", "port_b", "label"];

/// Flow-key → class map.
#[derive(Debug, Clone, Default)]
pub struct LabelSet {
    map: HashMap<FlowKey, Label>,
}

impl LabelSet {
    pub fn new() -> Self {
        LabelSet::default()
    }

    pub fn insert(&mut self, key: FlowKey, ddos: bool) {
        self.map
            .insert(key, if ddos { Label::Ddos } else { Label::Benign });
    }

    pub fn get(&self, key: &FlowKey) -> Option<Label> {
        self.map.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => {
                    Error::io_path("open label file", path, std::io::Error::other(e.to_string()))
                }
                _ => Error::format(format!("label file {}: {e}", path.display())),
            })?;
        let mut set = LabelSet::new();
        for (idx, record) in reader.records().enumerate() {
            let record =
                record.map_err(|e| Error::format(format!("label row {}: {e}", idx + 2)))?;
            if record.len() != 6 {
                return Err(Error::format(format!(
                    "label row {}: expected 6 fields, got {}",
                    idx + 2,
                    record.len()
                )));
            }
            let field = |i: usize| record.get(i).unwrap().trim();
            let proto: u8 = field(0)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad proto", idx + 2)))?;
            let ip_a: Ipv4Addr = field(1)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad ip_a", idx + 2)))?;
            let port_a: u16 = field(2)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad port_a", idx + 2)))?;
            let ip_b: Ipv4Addr = field(3)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad ip_b", idx + 2)))?;
            let port_b: u16 = field(4)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad port_b", idx + 2)))?;
            let label: u8 = field(5)
                .parse()
                .map_err(|_| Error::format(format!("label row {}: bad label", idx + 2)))?;
            if label > 1 {
                return Err(Error::format(format!(
                    "label row {}: label must be 0 or 1",
                    idx + 2
                )));
            }
            let key = FlowKey::new(proto, Endpoint::new(ip_a, port_a), Endpoint::new(ip_b, port_b));
            set.map.insert(key, if label == 1 { Label::Ddos } else { Label::Benign });
        }
        Ok(set)
    }

    /// Writes rows sorted by flow key so the output is reproducible.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)
            .map_err(|e| Error::io_path("create label file", path, std::io::Error::other(e.to_string())))?;
        writer
            .write_record(LABEL_CSV_HEADER)
            .map_err(|e| Error::io_path("write label file", path, std::io::Error::other(e.to_string())))?;
        let mut rows: Vec<(&FlowKey, &Label)> = self.map.iter().collect();
        rows.sort_by_key(|(k, _)| **k);
        for (key, label) in rows {
            writer
                .write_record([
                    key.proto.to_string(),
                    key.lo.ip.to_string(),
                    key.lo.port.to_string(),
                    key.hi.ip.to_string(),
                    key.hi.port.to_string(),
                    label.to_byte().to_string(),
                ])
                .map_err(|e| Error::io_path("write label file", path, std::io::Error::other(e.to_string())))?;
        }
        writer
            .flush()
            .map_err(|e| Error::io_path("flush label file", path, e))?;
        Ok(())
    }
}

/// Labelled samples plus the count of samples dropped for lacking a label.
#[derive(Debug)]
pub struct LabelOutcome {
    pub samples: Vec<FlowSample>,
    pub dropped: u64,
}

/// Attaches flow labels to samples; samples whose key is not in the label
/// set are dropped and counted.
pub fn apply_labels(samples: Vec<FlowSample>, labels: &LabelSet) -> LabelOutcome {
    let mut dropped = 0u64;
    let kept = samples
        .into_iter()
        .filter_map(|mut s| match labels.get(&s.key) {
            Some(label) => {
                s.label = label;
                Some(s)
            }
            None => {
                dropped += 1;
                None
            }
        })
        .collect();
    LabelOutcome {
        samples: kept,
        dropped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(key: FlowKey, window_start: f64) -> FlowSample {
        FlowSample {
            key,
            window_start,
            pkt_count: 1,
            label: Label::Unlabeled,
            matrix: vec![0.0; 11],
        }
    }

    fn key(a: u8) -> FlowKey {
        FlowKey::new(
            6,
            Endpoint::new(Ipv4Addr::new(10, 0, 0, a), 5000),
            Endpoint::new(Ipv4Addr::new(10, 0, 0, 200), 80),
        )
    }

    #[test]
    fn labels_are_constant_across_windows_of_a_flow() {
        let mut labels = LabelSet::new();
        labels.insert(key(1), true);
        let out = apply_labels(vec![sample(key(1), 0.0), sample(key(1), 10.0)], &labels);
        assert_eq!(out.samples.len(), 2);
        assert!(out.samples.iter().all(|s| s.label == Label::Ddos));
        assert_eq!(out.dropped, 0);
    }

    #[test]
    fn unknown_keys_are_dropped_and_counted() {
        let mut labels = LabelSet::new();
        labels.insert(key(1), false);
        let out = apply_labels(vec![sample(key(1), 0.0), sample(key(2), 0.0)], &labels);
        assert_eq!(out.samples.len(), 1);
        assert_eq!(out.dropped, 1);
    }

    #[test]
    fn empty_label_set_drops_everything() {
        let labels = LabelSet::new();
        let out = apply_labels(vec![sample(key(1), 0.0), sample(key(2), 0.0)], &labels);
        assert!(out.samples.is_empty());
        assert_eq!(out.dropped, 2);
    }

    #[test]
    fn csv_round_trip_is_canonical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let mut labels = LabelSet::new();
        labels.insert(key(3), true);
        labels.insert(key(1), false);
        labels.write_csv(&path).unwrap();
        let loaded = LabelSet::read_csv(&path).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded.get(&key(3)), Some(Label::Ddos));
        assert_eq!(loaded.get(&key(1)), Some(Label::Benign));

        // Reading a row given in non-canonical order still canonicalizes.
        let swapped = "proto,ip_a,port_a,ip_b,port_b,label\n6,10.0.0.200,80,10.0.0.7,5000,1\n";
        std::fs::write(&path, swapped).unwrap();
        let loaded = LabelSet::read_csv(&path).unwrap();
        assert_eq!(loaded.get(&key(7)), Some(Label::Ddos));
    }
}
