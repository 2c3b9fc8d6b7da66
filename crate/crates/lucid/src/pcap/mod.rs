//! Classic libpcap capture files: the 24-byte global header followed by
//! 16-byte per-record headers. Both endiannesses and both the microsecond
//! and nanosecond timestamp variants are accepted; the link type must be
//! Ethernet. Frames that cannot be dissected (IPv6, unknown ethertypes,
//! malformed headers) are skipped and counted rather than failing the run.

mod dissect;
mod features;
mod record;

pub use dissect::Skip;
pub use features::{dissect, PacketFeatures, ProtocolRegistry, FEATURE_COUNT, FEATURE_NAMES};
pub use record::{Layer, PacketRecord};

use std::fs::File;
use std::io::{BufReader, ErrorKind, Read};
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC_MICRO: u32 = 0xa1b2_c3d4;
const MAGIC_NANO: u32 = 0xa1b2_3c4d;
const LINKTYPE_ETHERNET: u32 = 1;

/// Upper bound on a single record's captured length; anything larger is
/// treated as a corrupt length field rather than a packet.
const MAX_RECORD_LEN: u32 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Endian {
    Little,
    Big,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsResolution {
    Micro,
    Nano,
}

/// Counters accumulated while reading a capture.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseStats {
    /// Packets successfully dissected and yielded.
    pub accepted: u64,
    /// IPv6 packets (not supported, skipped).
    pub skipped_ipv6: u64,
    /// Frames skipped for any other reason (unknown ethertype, malformed
    /// or snaplen-truncated headers).
    pub skipped_other: u64,
    /// Set when the file ended in the middle of a record.
    pub truncated: bool,
}

impl ParseStats {
    pub fn skipped(&self) -> u64 {
        self.skipped_ipv6 + self.skipped_other
    }
}

/// Streaming reader over a classic pcap byte source.
pub struct PcapReader<R: Read> {
    src: R,
    endian: Endian,
    resolution: TsResolution,
    stats: ParseStats,
    done: bool,
}

impl PcapReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io_path("open", path, e))?;
        PcapReader::new(BufReader::new(file))
    }
}

impl<R: Read> PcapReader<R> {
    /// Reads and validates the global header.
    pub fn new(mut src: R) -> Result<Self> {
        let mut header = [0u8; 24];
        let got = read_full(&mut src, &mut header).map_err(|e| Error::io("read pcap header", e))?;
        if got < 24 {
            return Err(Error::format(format!(
                "truncated pcap global header: {got} of 24 bytes"
            )));
        }
        let raw_magic = u32::from_le_bytes([header[0], header[1], header[2], header[3]]);
        let (endian, resolution) = match raw_magic {
            MAGIC_MICRO => (Endian::Little, TsResolution::Micro),
            MAGIC_NANO => (Endian::Little, TsResolution::Nano),
            m if m.swap_bytes() == MAGIC_MICRO => (Endian::Big, TsResolution::Micro),
            m if m.swap_bytes() == MAGIC_NANO => (Endian::Big, TsResolution::Nano),
            m => {
                return Err(Error::format(format!("unknown pcap magic 0x{m:08x}")));
            }
        };
        let read_u32 = |bytes: &[u8]| -> u32 {
            let arr = [bytes[0], bytes[1], bytes[2], bytes[3]];
            match endian {
                Endian::Little => u32::from_le_bytes(arr),
                Endian::Big => u32::from_be_bytes(arr),
            }
        };
        let linktype = read_u32(&header[20..24]);
        if linktype != LINKTYPE_ETHERNET {
            return Err(Error::format(format!(
                "unsupported pcap link type {linktype} (only Ethernet is handled)"
            )));
        }
        Ok(PcapReader {
            src,
            endian,
            resolution,
            stats: ParseStats::default(),
            done: false,
        })
    }

    pub fn stats(&self) -> &ParseStats {
        &self.stats
    }

    pub fn resolution(&self) -> TsResolution {
        self.resolution
    }

    fn u32_at(&self, bytes: &[u8]) -> u32 {
        let arr = [bytes[0], bytes[1], bytes[2], bytes[3]];
        match self.endian {
            Endian::Little => u32::from_le_bytes(arr),
            Endian::Big => u32::from_be_bytes(arr),
        }
    }

    /// Next dissectable packet, or `None` at end of file.
    ///
    /// Frames that fail dissection are counted and skipped. A record cut
    /// short by the end of the file sets the truncation flag and ends the
    /// stream without an error.
    pub fn next_record(&mut self) -> Result<Option<PacketRecord>> {
        loop {
            if self.done {
                return Ok(None);
            }
            let mut rec_header = [0u8; 16];
            let got = read_full(&mut self.src, &mut rec_header)
                .map_err(|e| Error::io("read pcap record header", e))?;
            if got == 0 {
                self.done = true;
                return Ok(None);
            }
            if got < 16 {
                self.stats.truncated = true;
                self.done = true;
                return Ok(None);
            }
            let ts_sec = self.u32_at(&rec_header[0..4]);
            let ts_frac = self.u32_at(&rec_header[4..8]);
            let incl_len = self.u32_at(&rec_header[8..12]);
            let orig_len = self.u32_at(&rec_header[12..16]);
            if incl_len > MAX_RECORD_LEN {
                return Err(Error::format(format!(
                    "pcap record claims {incl_len} captured bytes; file is corrupt"
                )));
            }
            let mut data = vec![0u8; incl_len as usize];
            let got = read_full(&mut self.src, &mut data)
                .map_err(|e| Error::io("read pcap record body", e))?;
            if got < incl_len as usize {
                self.stats.truncated = true;
                self.done = true;
                return Ok(None);
            }
            let ts = match self.resolution {
                TsResolution::Micro => ts_sec as f64 + ts_frac as f64 * 1e-6,
                TsResolution::Nano => ts_sec as f64 + ts_frac as f64 * 1e-9,
            };
            match dissect::dissect_frame(ts, &data, orig_len) {
                Ok(rec) => {
                    self.stats.accepted += 1;
                    return Ok(Some(rec));
                }
                Err(Skip::Ipv6) => self.stats.skipped_ipv6 += 1,
                Err(Skip::Other) => self.stats.skipped_other += 1,
            }
        }
    }
}

/// Reads a whole capture file into memory, in file order.
pub fn parse_pcap(path: &Path) -> Result<(Vec<PacketRecord>, ParseStats)> {
    let mut reader = PcapReader::open(path)?;
    let mut packets = Vec::new();
    while let Some(rec) = reader.next_record()? {
        packets.push(rec);
    }
    Ok((packets, reader.stats.clone()))
}

fn read_full<R: Read>(src: &mut R, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match src.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}
