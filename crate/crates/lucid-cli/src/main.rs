//! Command-line front end for the DDoS detection pipeline.
//!
//! Exit codes: 1 for I/O failures, 2 for malformed input files, 3 for
//! invalid configuration or data. Diagnostics go to stderr; results go to
//! stdout.

mod bench;
mod commands;
mod config;
mod grid;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "lucid",
    version,
    about = "Flow-based DDoS detection: preprocess captures, train and run a compact CNN"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic synthetic capture with flow labels
    Synth(commands::synth::Args),
    /// Convert captures into a normalized, labelled sample dataset
    Preprocess(commands::preprocess::Args),
    /// Split a dataset per flow into train/val/test, optionally balancing
    Split(commands::split::Args),
    /// Train the classifier and write a checkpoint plus history CSV
    Train(commands::train::Args),
    /// Score a model on a labelled dataset and print a metrics CSV row
    Evaluate(commands::evaluate::Args),
    /// Classify flows straight from a capture file
    Predict(commands::predict::Args),
    /// Rank features by convolutional activation on ddos samples
    Analyze(commands::analyze::Args),
    /// Measure inference throughput over a batch-size sweep
    Benchmark(commands::benchmark::Args),
    /// Train across a hyper-parameter grid and rank by validation F1
    Gridsearch(commands::gridsearch::Args),
}

fn exit_code(err: &lucid::Error) -> i32 {
    match err {
        lucid::Error::Io { .. } => 1,
        lucid::Error::Format(_) => 2,
        lucid::Error::Config(_) | lucid::Error::Numeric(_) => 3,
    }
}

fn main() {
    // Die quietly when a downstream pipe closes (e.g. `lucid predict | head`).
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => commands::synth::run(args),
        Command::Preprocess(args) => commands::preprocess::run(args),
        Command::Split(args) => commands::split::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Predict(args) => commands::predict::run(args),
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Benchmark(args) => commands::benchmark::run(args),
        Command::Gridsearch(args) => commands::gridsearch::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
