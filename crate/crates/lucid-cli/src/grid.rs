//! Grid definition file: a JSON object with one array per hyper-parameter.
//!
//! ```json
//! { "n": [10, 100], "t": [10, 100], "k": [32, 64], "h": [3], "m": ["global"] }
//! ```
//!
//! `m` entries are either pool sizes or the string `"global"` for
//! `n - h + 1`. The grid is the cartesian product of the five arrays.

use std::path::Path;

use serde::Deserialize;

use lucid::cnn::GridPoint;
use lucid::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    n: Vec<u32>,
    t: Vec<f64>,
    k: Vec<u32>,
    h: Vec<u32>,
    m: Vec<serde_json::Value>,
}

fn parse_pool(value: &serde_json::Value) -> Result<Option<u32>> {
    match value {
        serde_json::Value::String(s) if s == "global" => Ok(None),
        serde_json::Value::Null => Ok(None),
        serde_json::Value::Number(num) => num
            .as_u64()
            .map(|v| Some(v as u32))
            .ok_or_else(|| Error::config(format!("pool size must be a non-negative integer, got {num}"))),
        other => Err(Error::config(format!(
            "pool size must be a number or \"global\", got {other}"
        ))),
    }
}

pub fn load_grid(path: &Path) -> Result<Vec<GridPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io_path("read grid", path, e))?;
    let file: GridFile = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    if [file.n.len(), file.t.len(), file.k.len(), file.h.len(), file.m.len()].contains(&0) {
        return Err(Error::config(format!(
            "{}: every grid axis needs at least one value",
            path.display()
        )));
    }
    let pools: Vec<Option<u32>> = file.m.iter().map(parse_pool).collect::<Result<_>>()?;

    let mut points = Vec::new();
    for &n in &file.n {
        for &t in &file.t {
            for &k in &file.k {
                for &h in &file.h {
                    for &m in &pools {
                        points.push(GridPoint { n, t, k, h, m });
                    }
                }
            }
        }
    }
    Ok(points)
}
