use std::path::PathBuf;

use lucid::flow::{apply_labels, build_samples, normalize_and_pad, Dataset, LabelSet, NormalizationSpec, SampleMap};
use lucid::pcap::{parse_pcap, ProtocolRegistry};
use lucid::{Error, Result};

use crate::config;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Capture files, processed independently and merged.
    #[arg(long, num_args = 1..)]
    pcap: Vec<PathBuf>,
    /// Flow label CSV (proto,ip_a,port_a,ip_b,port_b,label).
    #[arg(long)]
    labels: PathBuf,
    /// Time window in seconds.
    #[arg(long)]
    t: Option<f64>,
    /// Packets kept per sample.
    #[arg(long)]
    n: Option<u32>,
    /// Output dataset file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    if args.pcap.is_empty() {
        return Err(Error::config("at least one --pcap file is required"));
    }
    let file_cfg = config::load(args.config.as_deref())?;
    let t = args.t.or(file_cfg.t).unwrap_or(100.0);
    let n = args.n.or(file_cfg.n).unwrap_or(100);
    if n == 0 {
        return Err(Error::config("--n must be at least 1"));
    }

    let registry = ProtocolRegistry::default();
    let mut merged = SampleMap::default();
    let mut collisions = 0u64;
    for path in &args.pcap {
        let (packets, stats) = parse_pcap(path)?;
        if stats.skipped() > 0 || stats.truncated {
            eprintln!(
                "{}: accepted {} packets, skipped {} (ipv6 {}), truncated: {}",
                path.display(),
                stats.accepted,
                stats.skipped(),
                stats.skipped_ipv6,
                stats.truncated
            );
        }
        // Window state restarts per trace; maps merge disjointly.
        let map = build_samples(packets, t, n as usize, &registry)?;
        collisions += merged.merge(map);
    }
    if collisions > 0 {
        eprintln!("warning: {collisions} window/flow cells collided across traces");
    }

    let spec = NormalizationSpec::new(t, &registry);
    let normalized = normalize_and_pad(merged, &spec, n as usize);
    if normalized.clamped > 0 {
        eprintln!("warning: {} values exceeded their scale and were clamped", normalized.clamped);
    }
    let label_set = LabelSet::read_csv(&args.labels)?;
    let labelled = apply_labels(normalized.samples, &label_set);
    if labelled.dropped > 0 {
        eprintln!("warning: {} samples dropped for missing labels", labelled.dropped);
    }

    let dataset = Dataset::new(t, n, spec, labelled.samples);
    dataset.write(&args.out)?;
    let (benign, ddos, unlabeled) = dataset.class_counts();
    println!(
        "wrote {} samples ({benign} benign, {ddos} ddos, {unlabeled} unlabeled) to {} [t={t}, n={n}]",
        dataset.samples.len(),
        args.out.display()
    );
    Ok(())
}
