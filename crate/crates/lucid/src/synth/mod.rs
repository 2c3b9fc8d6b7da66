//! Deterministic synthetic traffic with per-flow ground truth.
//!
//! Attack flows mimic repetition-based floods: one protocol, fixed packet
//! size, fixed header fields and a constant packet rate towards a single
//! victim. Benign flows mix the recognised application protocols with
//! randomized sizes, intervals and window sizes and answer in both
//! directions. The two populations differ by construction in several
//! feature columns (inter-arrival time, packet length, window size), so
//! the generated corpus stays separable by a one-feature threshold rule,
//! a property the training tests rely on. At the default rate the attack
//! period is 5 ms while no benign profile emits gaps under 10 ms.
//!
//! Output is a real pcap file plus a label CSV, so the whole ingest path
//! is exercised from bytes up. Everything is a pure function of the seed.

mod packet;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flow::{Endpoint, FlowKey, LabelSet};
use packet::{build_arp, build_icmp, build_tcp, build_udp, IcmpParams, TcpParams, UdpParams};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub ddos_flows: u32,
    pub benign_flows: u32,
    /// Trace length in seconds.
    pub duration: f64,
    /// Attack packets per second per flow.
    pub ddos_rate: f64,
    /// Fixed attack payload size in bytes.
    pub ddos_payload: u16,
    /// Capture epoch of the first possible packet.
    pub start_time: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            ddos_flows: 100,
            benign_flows: 100,
            duration: 1.0,
            ddos_rate: 200.0,
            ddos_payload: 120,
            start_time: 1_600_000_000.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ddos_flows == 0 || self.benign_flows == 0 {
            return Err(Error::config("flow counts must be at least 1"));
        }
        if self.ddos_flows > 1_000_000 || self.benign_flows > 65_536 {
            return Err(Error::config("flow counts exceed the generator's address pools"));
        }
        if !self.duration.is_finite() || self.duration <= 0.0 {
            return Err(Error::config("duration must be positive"));
        }
        if !self.ddos_rate.is_finite() || self.ddos_rate <= 0.0 {
            return Err(Error::config("attack rate must be positive"));
        }
        if !self.start_time.is_finite() || self.start_time < 0.0 || self.start_time > 4.0e9 {
            return Err(Error::config("start time must fit a pcap timestamp"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub pcap_path: PathBuf,
    pub labels_path: PathBuf,
    pub packets: u64,
    pub ddos_flows: u32,
    pub benign_flows: u32,
}

const VICTIM: Ipv4Addr = Ipv4Addr::new(192, 168, 100, 10);
const VICTIM_PORT: u16 = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Profile {
    Http,
    Dns,
    Ssh,
    Tls,
    Smtp,
    Ftp,
    Telnet,
    Irc,
    Icmp,
    Arp,
}

const PROFILES: [Profile; 10] = [
    Profile::Http,
    Profile::Dns,
    Profile::Ssh,
    Profile::Tls,
    Profile::Smtp,
    Profile::Ftp,
    Profile::Telnet,
    Profile::Irc,
    Profile::Icmp,
    Profile::Arp,
];

impl Profile {
    fn server_port(self) -> u16 {
        match self {
            Profile::Http => 80,
            Profile::Dns => 53,
            Profile::Ssh => 22,
            Profile::Tls => 443,
            Profile::Smtp => 25,
            Profile::Ftp => 21,
            Profile::Telnet => 23,
            Profile::Irc => 6667,
            Profile::Icmp | Profile::Arp => 0,
        }
    }

    fn server_ip(self) -> Ipv4Addr {
        let idx = PROFILES.iter().position(|p| *p == self).unwrap() as u8;
        Ipv4Addr::new(192, 168, 1, 10 + idx)
    }
}

struct Emitter {
    packets: Vec<(f64, Vec<u8>)>,
    ip_id: u16,
}

impl Emitter {
    fn push(&mut self, ts: f64, frame: Vec<u8>) {
        self.packets.push((ts, frame));
    }

    fn next_id(&mut self) -> u16 {
        self.ip_id = self.ip_id.wrapping_add(1);
        self.ip_id
    }
}

fn attacker_ip(i: u32) -> Ipv4Addr {
    Ipv4Addr::new(10, 1 + (i >> 16) as u8, (i >> 8) as u8, i as u8)
}

fn client_ip(i: u32) -> Ipv4Addr {
    Ipv4Addr::new(172, 16, (i >> 8) as u8, i as u8)
}

fn emit_attack_flow(cfg: &SynthConfig, i: u32, rng: &mut ChaCha8Rng, out: &mut Emitter) -> FlowKey {
    let src = (attacker_ip(i), 40000 + (i % 20000) as u16);
    let dst = (VICTIM, VICTIM_PORT);
    let start = cfg.start_time + rng.random::<f64>() * cfg.duration * 0.3;
    let end = cfg.start_time + cfg.duration;
    let period = 1.0 / cfg.ddos_rate;

    let mut ts = start;
    let mut seq = 1u32;
    while ts <= end {
        let id = out.next_id();
        out.push(
            ts,
            build_tcp(&TcpParams {
                src,
                dst,
                seq,
                ack: 1,
                flags: 0x018,
                window: 8192,
                payload_len: cfg.ddos_payload as usize,
                ip_id: id,
                ip_flags: 0x4000,
            }),
        );
        seq = seq.wrapping_add(cfg.ddos_payload as u32);
        ts += period;
    }
    FlowKey::new(6, Endpoint::new(src.0, src.1), Endpoint::new(dst.0, dst.1))
}

fn emit_benign_flow(cfg: &SynthConfig, i: u32, rng: &mut ChaCha8Rng, out: &mut Emitter) -> FlowKey {
    let profile = PROFILES[i as usize % PROFILES.len()];
    let client = client_ip(i);
    let server = profile.server_ip();
    let client_port: u16 = rng.random_range(10000..60000);
    let start = cfg.start_time + rng.random::<f64>() * cfg.duration * 0.8;
    let end = cfg.start_time + cfg.duration;
    let ip_flags = if rng.random::<f64>() < 0.92 { 0x4000 } else { 0x0000 };

    match profile {
        Profile::Icmp => {
            let mut ts = start;
            let pairs = rng.random_range(1..=3);
            for seq in 0..pairs {
                if ts > end {
                    break;
                }
                let payload = rng.random_range(20..64);
                let id = out.next_id();
                out.push(
                    ts,
                    build_icmp(&IcmpParams {
                        src: client,
                        dst: server,
                        icmp_type: 8,
                        id: i as u16,
                        seq,
                        payload_len: payload,
                        ip_id: id,
                        ip_flags,
                    }),
                );
                let reply_ts = ts + rng.random_range(0.02..0.1);
                if reply_ts <= end {
                    let id = out.next_id();
                    out.push(
                        reply_ts,
                        build_icmp(&IcmpParams {
                            src: server,
                            dst: client,
                            icmp_type: 0,
                            id: i as u16,
                            seq,
                            payload_len: payload,
                            ip_id: id,
                            ip_flags,
                        }),
                    );
                }
                ts += rng.random_range(0.3..1.0);
            }
            FlowKey::new(1, Endpoint::new(client, 0), Endpoint::new(server, 0))
        }
        Profile::Arp => {
            let mut ts = start;
            let rounds = rng.random_range(2..=3);
            for _ in 0..rounds {
                if ts > end {
                    break;
                }
                out.push(ts, build_arp(client, server, false));
                let reply_ts = ts + rng.random_range(0.02..0.1);
                if reply_ts <= end {
                    out.push(reply_ts, build_arp(server, client, true));
                }
                ts += rng.random_range(0.5..1.5);
            }
            FlowKey::new(0, Endpoint::new(client, 0), Endpoint::new(server, 0))
        }
        Profile::Dns => {
            let src = (client, client_port);
            let dst = (server, 53u16);
            let mut ts = start;
            let queries = rng.random_range(1..=2);
            for _ in 0..queries {
                if ts > end {
                    break;
                }
                let id = out.next_id();
                out.push(
                    ts,
                    build_udp(&UdpParams {
                        src,
                        dst,
                        payload_len: rng.random_range(25..60),
                        ip_id: id,
                        ip_flags,
                    }),
                );
                let reply_ts = ts + rng.random_range(0.05..0.25);
                if reply_ts <= end {
                    let id = out.next_id();
                    out.push(
                        reply_ts,
                        build_udp(&UdpParams {
                            src: dst,
                            dst: src,
                            payload_len: rng.random_range(60..250),
                            ip_id: id,
                            ip_flags,
                        }),
                    );
                }
                ts += rng.random_range(0.4..1.2);
            }
            FlowKey::new(17, Endpoint::new(client, client_port), Endpoint::new(server, 53))
        }
        _ => {
            // TCP request/response conversation with a handshake.
            let sport = profile.server_port();
            let src = (client, client_port);
            let dst = (server, sport);
            let client_win: u16 = rng.random_range(1000..65000);
            let server_win: u16 = rng.random_range(1000..65000);
            let mut client_seq = rng.random_range(1..1 << 30) as u32;
            let mut server_seq = rng.random_range(1..1 << 30) as u32;
            let mut ts = start;

            let tcp = |out: &mut Emitter,
                           ts: f64,
                           to_server: bool,
                           flags: u16,
                           payload: usize,
                           cseq: &mut u32,
                           sseq: &mut u32| {
                let id = out.next_id();
                let (s, d, seq, ack, win) = if to_server {
                    (src, dst, *cseq, *sseq, client_win)
                } else {
                    (dst, src, *sseq, *cseq, server_win)
                };
                out.push(
                    ts,
                    build_tcp(&TcpParams {
                        src: s,
                        dst: d,
                        seq,
                        ack,
                        flags,
                        window: win,
                        payload_len: payload,
                        ip_id: id,
                        ip_flags,
                    }),
                );
                if to_server {
                    *cseq = cseq.wrapping_add(payload.max(1) as u32);
                } else {
                    *sseq = sseq.wrapping_add(payload.max(1) as u32);
                }
            };

            tcp(out, ts, true, 0x002, 0, &mut client_seq, &mut server_seq); // syn
            ts += rng.random_range(0.02..0.08);
            if ts <= end {
                tcp(out, ts, false, 0x012, 0, &mut client_seq, &mut server_seq); // syn-ack
            }
            ts += rng.random_range(0.01..0.04);
            if ts <= end {
                tcp(out, ts, true, 0x010, 0, &mut client_seq, &mut server_seq); // ack
            }
            let exchanges = rng.random_range(1..=4);
            for _ in 0..exchanges {
                ts += rng.random_range(0.02..0.1);
                if ts > end {
                    break;
                }
                let req = rng.random_range(50..900);
                tcp(out, ts, true, 0x018, req, &mut client_seq, &mut server_seq);
                let reply_ts = ts + rng.random_range(0.05..0.3);
                if reply_ts <= end {
                    let resp = rng.random_range(100..1400);
                    tcp(out, reply_ts, false, 0x018, resp, &mut client_seq, &mut server_seq);
                }
                ts += rng.random_range(0.3..1.2);
            }
            FlowKey::new(6, Endpoint::new(client, client_port), Endpoint::new(server, sport))
        }
    }
}

fn write_pcap(path: &Path, packets: &[(f64, Vec<u8>)]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io_path("create", path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| Error::io_path("write", path, e);

    w.write_all(&0xa1b2_c3d4u32.to_le_bytes()).map_err(io)?;
    w.write_all(&2u16.to_le_bytes()).map_err(io)?;
    w.write_all(&4u16.to_le_bytes()).map_err(io)?;
    w.write_all(&0i32.to_le_bytes()).map_err(io)?;
    w.write_all(&0u32.to_le_bytes()).map_err(io)?;
    w.write_all(&65535u32.to_le_bytes()).map_err(io)?;
    w.write_all(&1u32.to_le_bytes()).map_err(io)?; // ethernet

    for (ts, frame) in packets {
        let mut sec = ts.floor() as u32;
        let mut usec = ((ts - ts.floor()) * 1e6).round() as u32;
        if usec == 1_000_000 {
            sec += 1;
            usec = 0;
        }
        w.write_all(&sec.to_le_bytes()).map_err(io)?;
        w.write_all(&usec.to_le_bytes()).map_err(io)?;
        w.write_all(&(frame.len() as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&(frame.len() as u32).to_le_bytes()).map_err(io)?;
        w.write_all(frame).map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Generates `{prefix}.pcap` and `{prefix}-labels.csv`.
pub fn generate(cfg: &SynthConfig, out_prefix: &Path) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut emitter = Emitter {
        packets: Vec::new(),
        ip_id: 0,
    };
    let mut labels = LabelSet::new();

    for i in 0..cfg.ddos_flows {
        let key = emit_attack_flow(cfg, i, &mut rng, &mut emitter);
        labels.insert(key, true);
    }
    for i in 0..cfg.benign_flows {
        let key = emit_benign_flow(cfg, i, &mut rng, &mut emitter);
        labels.insert(key, false);
    }

    // Stable sort keeps emission order for equal timestamps.
    emitter
        .packets
        .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let file_name = out_prefix
        .file_name()
        .ok_or_else(|| Error::config("output prefix must name a file"))?
        .to_string_lossy()
        .into_owned();
    let pcap_path = out_prefix.with_file_name(format!("{file_name}.pcap"));
    let labels_path = out_prefix.with_file_name(format!("{file_name}-labels.csv"));
    write_pcap(&pcap_path, &emitter.packets)?;
    labels.write_csv(&labels_path)?;

    Ok(SynthOutput {
        pcap_path,
        labels_path,
        packets: emitter.packets.len() as u64,
        ddos_flows: cfg.ddos_flows,
        benign_flows: cfg.benign_flows,
    })
}
