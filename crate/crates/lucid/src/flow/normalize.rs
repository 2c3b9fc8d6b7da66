//! Fixed-scale normalization: every attribute is divided by a per-field
//! theoretical maximum, so train and inference encodings agree without any
//! dataset-dependent statistics.

use crate::flow::sample::{FlowSample, Label};
use crate::flow::window::SampleMap;
use crate::pcap::{ProtocolRegistry, FEATURE_COUNT};

/// Per-feature divisor table.
///
/// `time` is scaled by the window length; protocol-code and bit-vector
/// fields by the registry geometry; the remaining header fields by the
/// maximum their bit width can hold.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    pub divisors: [f64; FEATURE_COUNT],
}

impl NormalizationSpec {
    pub fn new(t: f64, registry: &ProtocolRegistry) -> Self {
        NormalizationSpec {
            divisors: [
                t,                                // time
                65535.0,                          // pkt_len
                registry.len() as f64,            // highest_layer
                65535.0,                          // ip_flags
                registry.bitmask_max() as f64,    // protocols
                65535.0,                          // tcp_len
                u32::MAX as f64,                  // tcp_ack
                511.0,                            // tcp_flags
                65535.0,                          // tcp_win
                65535.0,                          // udp_len
                255.0,                            // icmp_type
            ],
        }
    }

    pub fn all_positive(&self) -> bool {
        self.divisors.iter().all(|d| *d > 0.0 && d.is_finite())
    }
}

/// Normalized samples plus a counter of out-of-range raw values that had
/// to be clamped to 1.0.
#[derive(Debug)]
pub struct NormalizeOutcome {
    pub samples: Vec<FlowSample>,
    pub clamped: u64,
}

/// Scales every attribute into [0, 1] and zero-pads each matrix to `n`
/// rows. Samples come out unlabeled, ordered by (window, flow key).
pub fn normalize_and_pad(map: SampleMap, spec: &NormalizationSpec, n: usize) -> NormalizeOutcome {
    let mut clamped = 0u64;
    let samples = map
        .into_samples()
        .map(|raw| {
            let mut matrix = vec![0f32; n * FEATURE_COUNT];
            let pkt_count = raw.rows.len().min(n) as u16;
            for (i, row) in raw.rows.iter().take(n).enumerate() {
                let values = row.to_row();
                for (c, v) in values.iter().enumerate() {
                    let mut scaled = v / spec.divisors[c];
                    if scaled > 1.0 {
                        scaled = 1.0;
                        clamped += 1;
                    } else if scaled < 0.0 {
                        scaled = 0.0;
                        clamped += 1;
                    }
                    matrix[i * FEATURE_COUNT + c] = scaled as f32;
                }
            }
            FlowSample {
                key: raw.key,
                window_start: raw.window_start,
                pkt_count,
                label: Label::Unlabeled,
                matrix,
            }
        })
        .collect();
    NormalizeOutcome { samples, clamped }
}
