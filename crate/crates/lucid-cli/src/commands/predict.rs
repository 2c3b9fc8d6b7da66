use std::path::PathBuf;

use lucid::cnn::{classify, load_model};
use lucid::flow::{build_samples, normalize_and_pad, Label, LabelSet};
use lucid::metrics::{confusion, metrics, METRICS_CSV_HEADER};
use lucid::pcap::{parse_pcap, ProtocolRegistry};
use lucid::Result;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    model: PathBuf,
    /// Capture to classify.
    #[arg(long)]
    pcap: PathBuf,
    /// Window length; defaults to the one the model was trained with.
    #[arg(long)]
    t: Option<f64>,
    /// Optional label CSV; when given, detection metrics are printed after
    /// the verdicts.
    #[arg(long)]
    labels: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let (model, norm) = load_model(&args.model)?;
    // The first divisor is the training window length; the sample shape
    // comes from the checkpoint, never from flags.
    let t = args.t.unwrap_or(norm.divisors[0]);
    let n = model.hyper.n as usize;

    let registry = ProtocolRegistry::default();
    let (packets, stats) = parse_pcap(&args.pcap)?;
    if stats.skipped() > 0 || stats.truncated {
        eprintln!(
            "{}: skipped {} packets, truncated: {}",
            args.pcap.display(),
            stats.skipped(),
            stats.truncated
        );
    }
    let map = build_samples(packets, t, n, &registry)?;
    let normalized = normalize_and_pad(map, &norm, n);

    let label_set = match &args.labels {
        Some(path) => Some(LabelSet::read_csv(path)?),
        None => None,
    };

    println!("tau,proto,ip_a,port_a,ip_b,port_b,p,verdict");
    let mut preds = Vec::new();
    let mut truth = Vec::new();
    for sample in &normalized.samples {
        let p = model.forward(&sample.matrix)?;
        let verdict = classify(p);
        let key = &sample.key;
        println!(
            "{},{},{},{},{},{},{:.6},{}",
            sample.window_start,
            key.proto,
            key.lo.ip,
            key.lo.port,
            key.hi.ip,
            key.hi.port,
            p,
            match verdict {
                Label::Ddos => "ddos",
                _ => "benign",
            }
        );
        if let Some(set) = &label_set {
            if let Some(label) = set.get(key) {
                preds.push(verdict);
                truth.push(label);
            }
        }
    }

    if label_set.is_some() && !preds.is_empty() {
        let report = metrics(&confusion(&preds, &truth)?)?;
        let name = args
            .pcap
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "pcap".into());
        println!("{METRICS_CSV_HEADER}");
        println!("{}", report.csv_row(&name, &model.hyper, t));
    }
    Ok(())
}
