//! Inference throughput and memory accounting.
//!
//! For each batch size the full sample set is pushed through the model
//! once as a warm-up, then timed over a number of repetitions; the median
//! wall-clock rate is reported. Packets per second are derived from the
//! sample rate and the rows-per-sample, and memory per sample is the raw
//! matrix footprint at 4- and 8-byte value widths.

use std::hint::black_box;
use std::time::Instant;

use lucid::cnn::ModelParams;
use lucid::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub batch_size: usize,
    pub samples_per_sec: f64,
    /// `samples_per_sec * n`, n being the packets each sample can hold.
    pub pps: f64,
    pub bytes_per_sample_w4: u64,
    pub bytes_per_sample_w8: u64,
}

pub const BENCH_CSV_HEADER: &str =
    "batch_size,samples_per_sec,pps,bytes_per_sample_w4,bytes_per_sample_w8";

impl BenchRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.batch_size,
            self.samples_per_sec,
            self.pps,
            self.bytes_per_sample_w4,
            self.bytes_per_sample_w8
        )
    }
}

/// Raw matrix bytes held per sample: `n * f * width`.
pub fn sample_memory_bytes(n: u32, f: u32, width: u32) -> u64 {
    n as u64 * f as u64 * width as u64
}

fn timed_pass(model: &ModelParams<f32>, xs: &[Vec<f32>], batch_size: usize) -> Result<f64> {
    let start = Instant::now();
    let mut acc = 0f32;
    for batch in xs.chunks(batch_size) {
        for x in batch {
            acc += model.forward(x)?;
        }
    }
    black_box(acc);
    Ok(start.elapsed().as_secs_f64())
}

pub fn run_benchmark(
    model: &ModelParams<f32>,
    xs: &[Vec<f32>],
    batch_sizes: &[usize],
    repetitions: usize,
) -> Result<Vec<BenchRow>> {
    if xs.is_empty() {
        return Err(Error::config("benchmark needs at least one sample"));
    }
    if batch_sizes.is_empty() {
        return Err(Error::config("benchmark needs at least one batch size"));
    }
    if batch_sizes.contains(&0) {
        return Err(Error::config("batch sizes must be at least 1"));
    }
    let reps = repetitions.max(3);
    let n = model.hyper.n;
    let f = model.hyper.f;

    let mut rows = Vec::with_capacity(batch_sizes.len());
    for &batch_size in batch_sizes {
        timed_pass(model, xs, batch_size)?; // warm-up, excluded
        let mut elapsed: Vec<f64> = (0..reps)
            .map(|_| timed_pass(model, xs, batch_size))
            .collect::<Result<_>>()?;
        elapsed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = elapsed[elapsed.len() / 2].max(1e-9);
        let samples_per_sec = xs.len() as f64 / median;
        rows.push(BenchRow {
            batch_size,
            samples_per_sec,
            pps: samples_per_sec * n as f64,
            bytes_per_sample_w4: sample_memory_bytes(n, f, 4),
            bytes_per_sample_w8: sample_memory_bytes(n, f, 8),
        });
    }
    Ok(rows)
}
