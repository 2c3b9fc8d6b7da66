use std::path::PathBuf;

use lucid::flow::{balance, split_dataset, Dataset, SplitRatios};
use lucid::{Error, Result};

use crate::config::resolve_seed;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input dataset file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Writes <prefix>-train.lucd, <prefix>-val.lucd, <prefix>-test.lucd.
    #[arg(long)]
    out_prefix: PathBuf,
    /// Flow fractions train,val,test summing to 1.
    #[arg(long, default_value = "0.81,0.09,0.10")]
    ratios: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Down-sample the majority class to equal flow counts first.
    #[arg(long)]
    balance: bool,
}

fn parse_ratios(text: &str) -> Result<SplitRatios> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::config(format!(
            "--ratios needs three comma-separated values, got {text:?}"
        )));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::config(format!("bad ratio {s:?}")))
    };
    let ratios = SplitRatios {
        train: parse(parts[0])?,
        val: parse(parts[1])?,
        test: parse(parts[2])?,
    };
    ratios.validate()?;
    Ok(ratios)
}

pub fn run(args: Args) -> Result<()> {
    let ratios = parse_ratios(&args.ratios)?;
    let seed = resolve_seed(args.seed, None)?;
    let dataset = Dataset::read(&args.input)?;

    let samples = if args.balance {
        balance(dataset.samples.clone(), seed)?
    } else {
        dataset.samples.clone()
    };
    let (train, val, test) = split_dataset(samples, ratios, seed)?;

    let prefix = args.out_prefix.to_string_lossy().into_owned();
    for (name, split) in [("train", train), ("val", val), ("test", test)] {
        let path = PathBuf::from(format!("{prefix}-{name}.lucd"));
        let ds = dataset.with_samples(split);
        ds.write(&path)?;
        let (benign, ddos, _) = ds.class_counts();
        println!(
            "{name}: {} samples ({benign} benign, {ddos} ddos) -> {}",
            ds.samples.len(),
            path.display()
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_parsing() {
        assert!(parse_ratios("0.81,0.09,0.10").is_ok());
        assert!(parse_ratios("0.5,0.5").is_err());
        assert!(parse_ratios("0.9,0.2,0.1").is_err());
        assert!(parse_ratios("a,b,c").is_err());
    }
}
