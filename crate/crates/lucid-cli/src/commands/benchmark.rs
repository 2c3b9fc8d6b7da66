use std::path::PathBuf;

use lucid::cnn::load_model;
use lucid::flow::Dataset;
use lucid::{Error, Result};

use crate::bench::{run_benchmark, BENCH_CSV_HEADER};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    model: PathBuf,
    /// Sample set pushed through the model.
    #[arg(long)]
    test: PathBuf,
    /// Comma-separated batch sizes to sweep.
    #[arg(long, default_value = "64,128,256,512,1024,2048,4096,8192")]
    batch_sizes: String,
    /// Timed repetitions per batch size (median reported, minimum 3).
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

fn parse_batch_sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::config(format!("bad batch size {part:?}")))
        })
        .collect()
}

pub fn run(args: Args) -> Result<()> {
    let batch_sizes = parse_batch_sizes(&args.batch_sizes)?;
    let (model, _) = load_model(&args.model)?;
    let dataset = Dataset::read(&args.test)?;
    let xs: Vec<Vec<f32>> = dataset.samples.iter().map(|s| s.matrix.clone()).collect();

    let rows = run_benchmark(&model, &xs, &batch_sizes, args.reps)?;
    println!("{BENCH_CSV_HEADER}");
    for row in &rows {
        println!("{}", row.csv_row());
    }
    Ok(())
}
