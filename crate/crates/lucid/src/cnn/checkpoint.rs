//! Model checkpoint, version 1.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic  "LUCM"
//! u16    version (1)
//! u32 x5 hyper parameters n, f, h, k, m
//! f x    f64 normalization divisors
//! k*h*f  f32 conv weights (filter-major, row-major per filter)
//! k      f32 conv biases
//! k'     f32 dense weights (filter-major: [k][pooled_len])
//! 1      f32 dense bias
//! ```
//!
//! The normalization divisors travel with the weights so inference can
//! encode raw traffic exactly as the training data was encoded.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::cnn::model::{Hyper, ModelParams};
use crate::error::{Error, Result};
use crate::flow::NormalizationSpec;
use crate::pcap::FEATURE_COUNT;
use crate::scalar::Scalar;

pub const MODEL_MAGIC: [u8; 4] = *b"LUCM";
pub const MODEL_VERSION: u16 = 1;

/// Serialized size for a given shape, for sanity checks.
pub fn checkpoint_size(hyper: &Hyper) -> usize {
    4 + 2 + 5 * 4 + FEATURE_COUNT * 8 + hyper.param_count() * 4
}

pub fn save_model<F: Scalar>(
    model: &ModelParams<F>,
    norm: &NormalizationSpec,
    path: &Path,
) -> Result<()> {
    model.hyper.validate()?;
    if model.hyper.f as usize != FEATURE_COUNT {
        return Err(Error::config(format!(
            "checkpoint expects {FEATURE_COUNT} features, model has {}",
            model.hyper.f
        )));
    }
    let file = File::create(path).map_err(|e| Error::io_path("create", path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| Error::io_path("write", path, e);

    w.write_all(&MODEL_MAGIC).map_err(io)?;
    w.write_u16::<LittleEndian>(MODEL_VERSION).map_err(io)?;
    for v in [model.hyper.n, model.hyper.f, model.hyper.h, model.hyper.k, model.hyper.m] {
        w.write_u32::<LittleEndian>(v).map_err(io)?;
    }
    for d in &norm.divisors {
        w.write_f64::<LittleEndian>(*d).map_err(io)?;
    }
    for v in &model.conv_w {
        w.write_f32::<LittleEndian>(v.to_f32()).map_err(io)?;
    }
    for v in &model.conv_b {
        w.write_f32::<LittleEndian>(v.to_f32()).map_err(io)?;
    }
    for v in &model.dense_w {
        w.write_f32::<LittleEndian>(v.to_f32()).map_err(io)?;
    }
    w.write_f32::<LittleEndian>(model.dense_b.to_f32()).map_err(io)?;
    w.flush().map_err(io)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<(ModelParams<f32>, NormalizationSpec)> {
    let file = File::open(path).map_err(|e| Error::io_path("open", path, e))?;
    let mut r = BufReader::new(file);
    let fmt = |msg: String| Error::format(format!("{}: {msg}", path.display()));
    let io = |e: std::io::Error| Error::format(format!("{}: truncated ({e})", path.display()));

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io)?;
    if magic != MODEL_MAGIC {
        return Err(fmt("not a model checkpoint (bad magic)".into()));
    }
    let version = r.read_u16::<LittleEndian>().map_err(io)?;
    if version != MODEL_VERSION {
        return Err(fmt(format!("unsupported checkpoint version {version}")));
    }
    let n = r.read_u32::<LittleEndian>().map_err(io)?;
    let f = r.read_u32::<LittleEndian>().map_err(io)?;
    let h = r.read_u32::<LittleEndian>().map_err(io)?;
    let k = r.read_u32::<LittleEndian>().map_err(io)?;
    let m = r.read_u32::<LittleEndian>().map_err(io)?;
    let hyper = Hyper { n, f, h, k, m };
    hyper
        .validate()
        .map_err(|e| fmt(format!("inconsistent shape in header: {e}")))?;
    if f as usize != FEATURE_COUNT {
        return Err(fmt(format!("expected {FEATURE_COUNT} features, found {f}")));
    }

    let mut divisors = [0f64; FEATURE_COUNT];
    for d in divisors.iter_mut() {
        *d = r.read_f64::<LittleEndian>().map_err(io)?;
    }
    let norm = NormalizationSpec { divisors };
    if !norm.all_positive() {
        return Err(fmt("normalization divisors must be positive".into()));
    }

    let mut read_vec = |len: usize| -> Result<Vec<f32>> {
        let mut v = vec![0f32; len];
        r.read_f32_into::<LittleEndian>(&mut v).map_err(io)?;
        Ok(v)
    };
    let conv_w = read_vec(k as usize * (h * f) as usize)?;
    let conv_b = read_vec(k as usize)?;
    let dense_w = read_vec(hyper.dense_inputs())?;
    let dense_b = read_vec(1)?[0];

    // Anything left over means the header and body disagree.
    let mut probe = [0u8; 1];
    match r.read(&mut probe) {
        Ok(0) => {}
        Ok(_) => return Err(fmt("trailing bytes after parameters".into())),
        Err(e) => return Err(Error::io_path("read", path, e)),
    }

    Ok((
        ModelParams {
            hyper,
            conv_w,
            conv_b,
            dense_w,
            dense_b,
        },
        norm,
    ))
}
