//! On-disk dataset container, version 1.
//!
//! Layout (all multi-byte integers little-endian):
//!
//! ```text
//! magic  "LUCD"
//! u16    version (1)
//! f64    time window t
//! u32    n  (rows per sample)
//! u32    f  (features per row)
//! f x    { u16 name length, utf-8 name }     feature names
//! f x    f64                                 normalization divisors
//! u64    sample count
//! per sample:
//!   u8 proto, u32 ip_lo, u16 port_lo, u32 ip_hi, u16 port_hi   flow key
//!   f64 window start
//!   u16 pkt_count
//!   u8  label (0 benign, 1 ddos, 255 unlabeled)
//!   n*f x f32 matrix, row-major
//! ```
//!
//! IPv4 addresses are stored as their 32-bit numeric value.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::net::Ipv4Addr;
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::flow::key::{Endpoint, FlowKey};
use crate::flow::normalize::NormalizationSpec;
use crate::flow::sample::{FlowSample, Label};
use crate::pcap::{FEATURE_COUNT, FEATURE_NAMES};

pub const DATASET_MAGIC: [u8; 4] = *b"LUCD";
pub const DATASET_VERSION: u16 = 1;

/// A preprocessed sample set together with the parameters that shaped it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Time window length used during preprocessing (seconds).
    pub t: f64,
    /// Rows per sample matrix.
    pub n: u32,
    pub feature_names: Vec<String>,
    pub norm: NormalizationSpec,
    pub samples: Vec<FlowSample>,
}

impl Dataset {
    pub fn new(t: f64, n: u32, norm: NormalizationSpec, samples: Vec<FlowSample>) -> Self {
        Dataset {
            t,
            n,
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            norm,
            samples,
        }
    }

    /// Features per row.
    pub fn f(&self) -> u32 {
        self.feature_names.len() as u32
    }

    /// (benign, ddos, unlabeled) sample counts.
    pub fn class_counts(&self) -> (u64, u64, u64) {
        let mut counts = (0, 0, 0);
        for s in &self.samples {
            match s.label {
                Label::Benign => counts.0 += 1,
                Label::Ddos => counts.1 += 1,
                Label::Unlabeled => counts.2 += 1,
            }
        }
        counts
    }

    /// Replaces the sample list, keeping header parameters.
    pub fn with_samples(&self, samples: Vec<FlowSample>) -> Dataset {
        Dataset {
            t: self.t,
            n: self.n,
            feature_names: self.feature_names.clone(),
            norm: self.norm.clone(),
            samples,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io_path("create", path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e: std::io::Error| Error::io_path("write", path, e);

        w.write_all(&DATASET_MAGIC).map_err(io)?;
        w.write_u16::<LittleEndian>(DATASET_VERSION).map_err(io)?;
        w.write_f64::<LittleEndian>(self.t).map_err(io)?;
        w.write_u32::<LittleEndian>(self.n).map_err(io)?;
        w.write_u32::<LittleEndian>(self.f()).map_err(io)?;
        for name in &self.feature_names {
            let bytes = name.as_bytes();
            w.write_u16::<LittleEndian>(bytes.len() as u16).map_err(io)?;
            w.write_all(bytes).map_err(io)?;
        }
        for d in &self.norm.divisors {
            w.write_f64::<LittleEndian>(*d).map_err(io)?;
        }
        w.write_u64::<LittleEndian>(self.samples.len() as u64)
            .map_err(io)?;

        let cells = self.n as usize * self.f() as usize;
        for s in &self.samples {
            if s.matrix.len() != cells {
                return Err(Error::config(format!(
                    "sample matrix has {} cells, dataset shape needs {cells}",
                    s.matrix.len()
                )));
            }
            w.write_u8(s.key.proto).map_err(io)?;
            w.write_u32::<LittleEndian>(u32::from(s.key.lo.ip)).map_err(io)?;
            w.write_u16::<LittleEndian>(s.key.lo.port).map_err(io)?;
            w.write_u32::<LittleEndian>(u32::from(s.key.hi.ip)).map_err(io)?;
            w.write_u16::<LittleEndian>(s.key.hi.port).map_err(io)?;
            w.write_f64::<LittleEndian>(s.window_start).map_err(io)?;
            w.write_u16::<LittleEndian>(s.pkt_count).map_err(io)?;
            w.write_u8(s.label.to_byte()).map_err(io)?;
            for v in &s.matrix {
                w.write_f32::<LittleEndian>(*v).map_err(io)?;
            }
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Dataset> {
        let file = File::open(path).map_err(|e| Error::io_path("open", path, e))?;
        let mut r = BufReader::new(file);
        let fmt = |msg: &str| Error::format(format!("{}: {msg}", path.display()));
        let io = |e: std::io::Error| Error::format(format!("{}: truncated ({e})", path.display()));

        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if magic != DATASET_MAGIC {
            return Err(fmt("not a dataset file (bad magic)"));
        }
        let version = r.read_u16::<LittleEndian>().map_err(io)?;
        if version != DATASET_VERSION {
            return Err(fmt(&format!("unsupported dataset version {version}")));
        }
        let t = r.read_f64::<LittleEndian>().map_err(io)?;
        let n = r.read_u32::<LittleEndian>().map_err(io)?;
        let f = r.read_u32::<LittleEndian>().map_err(io)?;
        if f as usize != FEATURE_COUNT {
            return Err(fmt(&format!("expected {FEATURE_COUNT} features, found {f}")));
        }
        if n == 0 || n > 1_000_000 {
            return Err(fmt(&format!("implausible rows-per-sample value {n}")));
        }
        let mut feature_names = Vec::with_capacity(f as usize);
        for _ in 0..f {
            let len = r.read_u16::<LittleEndian>().map_err(io)? as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf).map_err(io)?;
            let name = String::from_utf8(buf).map_err(|_| fmt("feature name is not utf-8"))?;
            feature_names.push(name);
        }
        let mut divisors = [0f64; FEATURE_COUNT];
        for d in divisors.iter_mut() {
            *d = r.read_f64::<LittleEndian>().map_err(io)?;
        }
        let norm = NormalizationSpec { divisors };
        if !norm.all_positive() {
            return Err(fmt("normalization divisors must be positive"));
        }
        let count = r.read_u64::<LittleEndian>().map_err(io)?;

        let cells = n as usize * f as usize;
        let mut samples = Vec::with_capacity(count.min(1 << 20) as usize);
        for _ in 0..count {
            let proto = r.read_u8().map_err(io)?;
            let ip_lo = Ipv4Addr::from(r.read_u32::<LittleEndian>().map_err(io)?);
            let port_lo = r.read_u16::<LittleEndian>().map_err(io)?;
            let ip_hi = Ipv4Addr::from(r.read_u32::<LittleEndian>().map_err(io)?);
            let port_hi = r.read_u16::<LittleEndian>().map_err(io)?;
            let window_start = r.read_f64::<LittleEndian>().map_err(io)?;
            let pkt_count = r.read_u16::<LittleEndian>().map_err(io)?;
            let label_byte = r.read_u8().map_err(io)?;
            let label = Label::from_byte(label_byte)
                .ok_or_else(|| fmt(&format!("invalid label byte {label_byte}")))?;
            let mut matrix = vec![0f32; cells];
            r.read_f32_into::<LittleEndian>(&mut matrix).map_err(io)?;
            samples.push(FlowSample {
                key: FlowKey::new(proto, Endpoint::new(ip_lo, port_lo), Endpoint::new(ip_hi, port_hi)),
                window_start,
                pkt_count,
                label,
                matrix,
            });
        }
        Ok(Dataset {
            t,
            n,
            feature_names,
            norm,
            samples,
        })
    }
}
