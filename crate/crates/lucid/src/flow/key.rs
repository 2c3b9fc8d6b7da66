use std::fmt;
use std::net::Ipv4Addr;

use crate::pcap::PacketRecord;

/// One side of a flow: an address/port pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub ip: Ipv4Addr,
    pub port: u16,
}

impl Endpoint {
    pub fn new(ip: Ipv4Addr, port: u16) -> Self {
        Endpoint { ip, port }
    }
}

/// Canonical bidirectional 5-tuple: the two endpoints are stored in
/// lexicographic (ip, port) order so that both directions of a flow map to
/// the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowKey {
    pub proto: u8,
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl FlowKey {
    pub fn new(proto: u8, a: Endpoint, b: Endpoint) -> Self {
        if a <= b {
            FlowKey { proto, lo: a, hi: b }
        } else {
            FlowKey { proto, lo: b, hi: a }
        }
    }

    pub fn of_packet(pkt: &PacketRecord) -> Self {
        FlowKey::new(
            pkt.proto,
            Endpoint::new(pkt.src_ip, pkt.src_port),
            Endpoint::new(pkt.dst_ip, pkt.dst_port),
        )
    }
}

impl fmt::Display for FlowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}:{}-{}:{}",
            self.proto, self.lo.ip, self.lo.port, self.hi.ip, self.hi.port
        )
    }
}
