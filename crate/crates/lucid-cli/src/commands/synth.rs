use std::path::PathBuf;

use lucid::synth::{generate, SynthConfig};
use lucid::Result;

use crate::config::resolve_seed;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Generator seed; falls back to LUCID_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    ddos_flows: u32,
    #[arg(long, default_value_t = 100)]
    benign_flows: u32,
    /// Trace length in seconds.
    #[arg(long, default_value_t = 2.0)]
    duration: f64,
    /// Attack packets per second per flow.
    #[arg(long, default_value_t = 100.0)]
    ddos_rate: f64,
    /// Writes <prefix>.pcap and <prefix>-labels.csv.
    #[arg(long)]
    out_prefix: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let cfg = SynthConfig {
        seed: resolve_seed(args.seed, None)?,
        ddos_flows: args.ddos_flows,
        benign_flows: args.benign_flows,
        duration: args.duration,
        ddos_rate: args.ddos_rate,
        ..SynthConfig::default()
    };
    let out = generate(&cfg, &args.out_prefix)?;
    println!(
        "wrote {} packets for {} ddos + {} benign flows to {} / {}",
        out.packets,
        out.ddos_flows,
        out.benign_flows,
        out.pcap_path.display(),
        out.labels_path.display()
    );
    Ok(())
}
