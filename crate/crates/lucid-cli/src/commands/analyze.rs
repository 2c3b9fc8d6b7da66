use std::path::PathBuf;

use lucid::analysis::attribute;
use lucid::cnn::load_model;
use lucid::flow::{Dataset, Label};
use lucid::{Error, Result};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    model: PathBuf,
    /// Dataset whose ddos samples drive the attribution.
    #[arg(long)]
    test: PathBuf,
    /// Also write the ranking as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let (model, _) = load_model(&args.model)?;
    let dataset = Dataset::read(&args.test)?;
    let flows: Vec<Vec<f32>> = dataset
        .samples
        .iter()
        .filter(|s| s.label == Label::Ddos)
        .map(|s| s.matrix.clone())
        .collect();
    if flows.is_empty() {
        return Err(Error::config(format!(
            "{} contains no ddos samples to analyze",
            args.test.display()
        )));
    }

    let ranking = attribute(&model, &flows)?;
    print!("{}", ranking.table());
    if let Some(path) = &args.csv {
        std::fs::write(path, ranking.csv()).map_err(|e| Error::io_path("write", path, e))?;
        eprintln!("csv written to {}", path.display());
    }
    Ok(())
}
