//! Property suite for the preprocessing stage on randomized packet streams.

use std::collections::{BTreeMap, HashSet};
use std::net::Ipv4Addr;

use proptest::prelude::*;

use lucid::flow::{
    apply_labels, build_samples, normalize_and_pad, split_dataset, FlowKey, FlowSample, Label,
    LabelSet, NormalizationSpec, SplitRatios,
};
use lucid::pcap::{Layer, PacketRecord, ProtocolRegistry, FEATURE_COUNT};

/// A compact description of one packet that the strategy can generate.
#[derive(Debug, Clone)]
struct PacketSpec {
    flow: u8,
    gap: f64,
    reversed: bool,
    tcp_flags: u16,
    wire_len: u16,
}

fn record(ts: f64, spec: &PacketSpec) -> PacketRecord {
    let client = Ipv4Addr::new(10, 0, 0, spec.flow);
    let server = Ipv4Addr::new(192, 168, 0, 1);
    let (src_ip, dst_ip, src_port, dst_port) = if spec.reversed {
        (server, client, 80, 5000 + spec.flow as u16)
    } else {
        (client, server, 5000 + spec.flow as u16, 80)
    };
    PacketRecord {
        ts,
        src_ip,
        dst_ip,
        src_port,
        dst_port,
        proto: 6,
        layers: vec![Layer::Eth, Layer::Ip, Layer::Tcp],
        wire_len: spec.wire_len as u32,
        ip_total_len: spec.wire_len.saturating_sub(14),
        ip_flags_word: 0x4000,
        tcp_payload_len: spec.wire_len.saturating_sub(54),
        tcp_ack: 1,
        tcp_flags: spec.tcp_flags,
        tcp_win: 1024,
        udp_payload_len: 0,
        icmp_type: 0,
    }
}

fn flip(rec: &PacketRecord) -> PacketRecord {
    let mut r = rec.clone();
    std::mem::swap(&mut r.src_ip, &mut r.dst_ip);
    std::mem::swap(&mut r.src_port, &mut r.dst_port);
    r
}

fn stream(specs: &[PacketSpec]) -> Vec<PacketRecord> {
    let mut ts = 0.0;
    specs
        .iter()
        .map(|s| {
            ts += s.gap;
            record(ts, s)
        })
        .collect()
}

fn packet_spec() -> impl Strategy<Value = PacketSpec> {
    (
        0u8..6,
        0.0f64..1.5,
        any::<bool>(),
        0u16..512,
        54u16..1500,
    )
        .prop_map(|(flow, gap, reversed, tcp_flags, wire_len)| PacketSpec {
            flow,
            gap,
            reversed,
            tcp_flags,
            wire_len,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn windowing_invariants_hold(
        specs in proptest::collection::vec(packet_spec(), 1..120),
        t in 0.25f64..4.0,
        n in 1usize..8,
    ) {
        let registry = ProtocolRegistry::default();
        let packets = stream(&specs);
        let map = build_samples(packets.clone(), t, n, &registry).unwrap();

        // Packet cap and per-row structure.
        let mut window_starts: Vec<f64> = Vec::new();
        let mut assigned = 0usize;
        for sample in map.iter() {
            prop_assert!(sample.pkt_count() <= n);
            assigned += sample.pkt_count();
            prop_assert_eq!(sample.rows[0].time, 0.0);
            let mut last = 0.0;
            for row in &sample.rows {
                prop_assert!(row.time >= last - 1e-12);
                prop_assert!(row.time <= t + 1e-9, "relative time exceeds the window");
                last = row.time;
            }
            window_starts.push(sample.window_start);
        }
        prop_assert!(assigned <= packets.len());

        // Window starts are packet timestamps and successive distinct
        // starts are more than t apart.
        let ts_set: HashSet<u64> = packets.iter().map(|p| p.ts.to_bits()).collect();
        window_starts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        window_starts.dedup();
        for w in &window_starts {
            prop_assert!(ts_set.contains(&w.to_bits()));
        }
        for pair in window_starts.windows(2) {
            prop_assert!(pair[1] - pair[0] > t);
        }

        // No empty samples.
        for sample in map.iter() {
            prop_assert!(sample.pkt_count() >= 1);
        }
    }

    #[test]
    fn normalization_bounds_and_padding(
        specs in proptest::collection::vec(packet_spec(), 1..80),
        t in 0.5f64..3.0,
        n in 1usize..6,
    ) {
        let registry = ProtocolRegistry::default();
        let map = build_samples(stream(&specs), t, n, &registry).unwrap();
        let spec = NormalizationSpec::new(t, &registry);
        let out = normalize_and_pad(map, &spec, n);
        for s in &out.samples {
            prop_assert_eq!(s.matrix.len(), n * FEATURE_COUNT);
            prop_assert!(s.matrix.iter().all(|v| (0.0..=1.0).contains(v)));
            for row in s.pkt_count as usize..n {
                prop_assert!(s.row(row, FEATURE_COUNT).iter().all(|v| *v == 0.0));
            }
        }
    }

    #[test]
    fn reversing_every_packet_gives_identical_samples(
        specs in proptest::collection::vec(packet_spec(), 1..80),
        t in 0.5f64..3.0,
        n in 1usize..6,
    ) {
        let registry = ProtocolRegistry::default();
        let forward = stream(&specs);
        let reversed: Vec<PacketRecord> = forward.iter().map(flip).collect();
        let spec = NormalizationSpec::new(t, &registry);
        let a = normalize_and_pad(build_samples(forward, t, n, &registry).unwrap(), &spec, n);
        let b = normalize_and_pad(build_samples(reversed, t, n, &registry).unwrap(), &spec, n);
        prop_assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn labels_stay_constant_per_flow(
        specs in proptest::collection::vec(packet_spec(), 1..100),
        t in 0.25f64..1.0,
        n in 1usize..5,
    ) {
        let registry = ProtocolRegistry::default();
        let map = build_samples(stream(&specs), t, n, &registry).unwrap();
        let spec = NormalizationSpec::new(t, &registry);
        let out = normalize_and_pad(map, &spec, n);

        let mut labels = LabelSet::new();
        for flow in 0u8..6 {
            let key = FlowKey::new(
                6,
                lucid::flow::Endpoint::new(Ipv4Addr::new(10, 0, 0, flow), 5000 + flow as u16),
                lucid::flow::Endpoint::new(Ipv4Addr::new(192, 168, 0, 1), 80),
            );
            labels.insert(key, flow % 2 == 0);
        }
        let labelled = apply_labels(out.samples, &labels);
        prop_assert_eq!(labelled.dropped, 0);
        let mut per_key: BTreeMap<FlowKey, HashSet<u8>> = BTreeMap::new();
        for s in &labelled.samples {
            prop_assert_ne!(s.label, Label::Unlabeled);
            per_key.entry(s.key).or_default().insert(s.label.to_byte());
            prop_assert_eq!(Some(s.label), labels.get(&s.key));
        }
        for seen in per_key.values() {
            prop_assert_eq!(seen.len(), 1);
        }
    }

    #[test]
    fn split_keeps_flows_whole(
        flows in 3usize..40,
        windows in 1usize..6,
        seed in any::<u64>(),
    ) {
        let samples: Vec<FlowSample> = (0..flows)
            .flat_map(|i| {
                let key = FlowKey::new(
                    6,
                    lucid::flow::Endpoint::new(Ipv4Addr::from(0x0a000000 + i as u32), 1000),
                    lucid::flow::Endpoint::new(Ipv4Addr::new(192, 168, 0, 1), 80),
                );
                (0..windows).map(move |w| FlowSample {
                    key,
                    window_start: w as f64,
                    pkt_count: 1,
                    label: Label::Benign,
                    matrix: vec![0.0; FEATURE_COUNT],
                })
            })
            .collect();
        let (train, val, test) =
            split_dataset(samples, SplitRatios::DEFAULT, seed).unwrap();
        let keys = |v: &[FlowSample]| v.iter().map(|s| s.key).collect::<HashSet<_>>();
        let (ktr, kv, kte) = (keys(&train), keys(&val), keys(&test));
        prop_assert!(ktr.is_disjoint(&kv));
        prop_assert!(ktr.is_disjoint(&kte));
        prop_assert!(kv.is_disjoint(&kte));
        prop_assert_eq!(ktr.len() + kv.len() + kte.len(), flows);
        // Rounded proportions hold to within one flow.
        let expect_train = (0.81 * flows as f64).round() as isize;
        let expect_val = (0.09 * flows as f64).round() as isize;
        prop_assert!((ktr.len() as isize - expect_train).abs() <= 1);
        prop_assert!((kv.len() as isize - expect_val).abs() <= 1);
        // Every sample of a flow is in exactly one split.
        prop_assert_eq!(train.len() + val.len() + test.len(), flows * windows);
    }
}
