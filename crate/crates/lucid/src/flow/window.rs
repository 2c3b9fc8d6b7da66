//! Grouping of packets into per-window, per-flow samples.
//!
//! A single window clock is shared by all flows: the window start advances
//! to a packet's timestamp whenever that packet falls past the current
//! window's end. Within a window, each bidirectional flow accumulates up to
//! `n` packets in capture order; later packets of the flow are dropped.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::flow::key::FlowKey;
use crate::pcap::{dissect, PacketFeatures, PacketRecord, ProtocolRegistry};

/// One (window, flow) cell before normalization: feature rows with `time`
/// already rewritten relative to the flow's first packet in this window.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSample {
    pub key: FlowKey,
    pub window_start: f64,
    pub rows: Vec<PacketFeatures>,
    first_ts: f64,
}

impl RawSample {
    pub fn pkt_count(&self) -> usize {
        self.rows.len()
    }
}

/// Samples keyed by (window start, flow), iterated in that order.
#[derive(Debug, Clone, Default)]
pub struct SampleMap {
    inner: BTreeMap<(u64, FlowKey), RawSample>,
}

impl SampleMap {
    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RawSample> {
        self.inner.values()
    }

    pub fn into_samples(self) -> impl Iterator<Item = RawSample> {
        self.inner.into_values()
    }

    /// Merges samples from another trace into this map.
    ///
    /// Window starts come from packet timestamps, so cells from distinct
    /// traces essentially never collide; if they do, the existing sample
    /// wins and the collision is reported in the returned count.
    pub fn merge(&mut self, other: SampleMap) -> u64 {
        let mut collisions = 0;
        for (k, v) in other.inner {
            match self.inner.entry(k) {
                std::collections::btree_map::Entry::Occupied(_) => collisions += 1,
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(v);
                }
            }
        }
        collisions
    }
}

/// Folds a packet stream into per-(window, flow) samples of at most `n`
/// packets each.
pub fn build_samples<I>(
    packets: I,
    t: f64,
    n: usize,
    registry: &ProtocolRegistry,
) -> Result<SampleMap>
where
    I: IntoIterator<Item = PacketRecord>,
{
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::config(format!("time window must be positive, got {t}")));
    }
    if n == 0 {
        return Err(Error::config("packets per sample must be at least 1"));
    }

    let mut map: BTreeMap<(u64, FlowKey), RawSample> = BTreeMap::new();
    let mut window_start: Option<f64> = None;

    for pkt in packets {
        let key = FlowKey::of_packet(&pkt);
        let advance = match window_start {
            None => true,
            Some(tau) => pkt.ts > tau + t,
        };
        if advance {
            window_start = Some(pkt.ts);
        }
        let tau = window_start.unwrap();

        let cell = map.entry((tau.to_bits(), key)).or_insert_with(|| RawSample {
            key,
            window_start: tau,
            rows: Vec::new(),
            first_ts: pkt.ts,
        });
        if cell.rows.len() < n {
            let mut feat = dissect(&pkt, registry);
            // Clock disorder inside a capture clamps to the window-local
            // flow origin rather than going negative.
            feat.time = (pkt.ts - cell.first_ts).max(0.0);
            cell.rows.push(feat);
        }
    }

    Ok(SampleMap { inner: map })
}
