//! Optional TOML settings file and the seed fallback chain.
//!
//! Precedence everywhere: command-line flag, then config file, then the
//! `LUCID_SEED` environment variable (seed only), then built-in defaults.

use std::path::Path;

use serde::Deserialize;

use lucid::{Error, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub t: Option<f64>,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub h: Option<u32>,
    pub m: Option<u32>,
    pub alpha: Option<f64>,
    pub batch: Option<usize>,
    pub patience: Option<u32>,
    pub max_epochs: Option<u32>,
    pub seed: Option<u64>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io_path("read config", path, e))?;
    toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

/// flag > config file > LUCID_SEED > 0.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag.or(file) {
        return Ok(seed);
    }
    match std::env::var("LUCID_SEED") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("LUCID_SEED is not an integer: {value:?}"))),
        Err(_) => Ok(0),
    }
}
