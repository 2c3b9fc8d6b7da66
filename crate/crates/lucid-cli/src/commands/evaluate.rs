use std::path::PathBuf;

use lucid::cnn::{classify, load_model, Examples};
use lucid::flow::{Dataset, Label};
use lucid::metrics::{confusion, metrics, METRICS_CSV_HEADER};
use lucid::Result;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    model: PathBuf,
    /// Labelled test dataset.
    #[arg(long)]
    test: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let (model, _norm) = load_model(&args.model)?;
    let test_ds = Dataset::read(&args.test)?;
    let examples = Examples::<f32>::from_dataset(&test_ds)?;

    let probs = model.predict(&examples.xs)?;
    let preds: Vec<Label> = probs.iter().map(|p| classify(*p)).collect();
    let truth: Vec<Label> = examples
        .ys
        .iter()
        .map(|y| if *y == 1 { Label::Ddos } else { Label::Benign })
        .collect();
    let report = metrics(&confusion(&preds, &truth)?)?;

    let dataset_name = args
        .test
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "test".into());
    println!("{METRICS_CSV_HEADER}");
    println!("{}", report.csv_row(&dataset_name, &model.hyper, test_ds.t));
    Ok(())
}
