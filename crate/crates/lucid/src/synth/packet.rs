//! Raw Ethernet frame builders for the traffic generator. Checksums are
//! computed properly so the output is valid traffic, and every frame is
//! padded to the 60-byte Ethernet minimum like a real capture.

use std::net::Ipv4Addr;

const MIN_FRAME: usize = 60;

/// RFC 1071 one's-complement sum.
fn checksum16(data: &[u8]) -> u16 {
    let mut sum = 0u32;
    let mut chunks = data.chunks_exact(2);
    for chunk in &mut chunks {
        sum += u16::from_be_bytes([chunk[0], chunk[1]]) as u32;
    }
    if let [last] = chunks.remainder() {
        sum += (*last as u32) << 8;
    }
    while sum >> 16 != 0 {
        sum = (sum & 0xffff) + (sum >> 16);
    }
    !(sum as u16)
}

fn transport_checksum(src: Ipv4Addr, dst: Ipv4Addr, proto: u8, segment: &[u8]) -> u16 {
    let mut pseudo = Vec::with_capacity(12 + segment.len());
    pseudo.extend_from_slice(&src.octets());
    pseudo.extend_from_slice(&dst.octets());
    pseudo.push(0);
    pseudo.push(proto);
    pseudo.extend_from_slice(&(segment.len() as u16).to_be_bytes());
    pseudo.extend_from_slice(segment);
    match checksum16(&pseudo) {
        0 => 0xffff,
        c => c,
    }
}

/// MACs are derived from the IPs so frames are deterministic.
fn mac_for(ip: Ipv4Addr) -> [u8; 6] {
    let o = ip.octets();
    [0x02, 0x00, o[0], o[1], o[2], o[3]]
}

fn eth_header(src: Ipv4Addr, dst: Ipv4Addr, ethertype: u16) -> Vec<u8> {
    let mut f = Vec::with_capacity(MIN_FRAME);
    f.extend_from_slice(&mac_for(dst));
    f.extend_from_slice(&mac_for(src));
    f.extend_from_slice(&ethertype.to_be_bytes());
    f
}

fn ipv4_header(
    src: Ipv4Addr,
    dst: Ipv4Addr,
    proto: u8,
    payload_len: usize,
    id: u16,
    flags_word: u16,
) -> Vec<u8> {
    let total = 20 + payload_len;
    let mut h = Vec::with_capacity(20);
    h.push(0x45);
    h.push(0x00);
    h.extend_from_slice(&(total as u16).to_be_bytes());
    h.extend_from_slice(&id.to_be_bytes());
    h.extend_from_slice(&flags_word.to_be_bytes());
    h.push(64); // ttl
    h.push(proto);
    h.extend_from_slice(&[0, 0]); // checksum placeholder
    h.extend_from_slice(&src.octets());
    h.extend_from_slice(&dst.octets());
    let ck = checksum16(&h);
    h[10..12].copy_from_slice(&ck.to_be_bytes());
    h
}

fn pad(mut frame: Vec<u8>) -> Vec<u8> {
    while frame.len() < MIN_FRAME {
        frame.push(0);
    }
    frame
}

pub struct TcpParams {
    pub src: (Ipv4Addr, u16),
    pub dst: (Ipv4Addr, u16),
    pub seq: u32,
    pub ack: u32,
    /// Low 9 bits: NS plus the classic flag byte.
    pub flags: u16,
    pub window: u16,
    pub payload_len: usize,
    pub ip_id: u16,
    pub ip_flags: u16,
}

pub fn build_tcp(p: &TcpParams) -> Vec<u8> {
    let mut seg = Vec::with_capacity(20 + p.payload_len);
    seg.extend_from_slice(&p.src.1.to_be_bytes());
    seg.extend_from_slice(&p.dst.1.to_be_bytes());
    seg.extend_from_slice(&p.seq.to_be_bytes());
    seg.extend_from_slice(&p.ack.to_be_bytes());
    seg.push(0x50 | ((p.flags >> 8) as u8 & 0x01)); // offset 5, NS bit
    seg.push((p.flags & 0xff) as u8);
    seg.extend_from_slice(&p.window.to_be_bytes());
    seg.extend_from_slice(&[0, 0, 0, 0]); // checksum, urgent
    seg.resize(20 + p.payload_len, 0);
    let ck = transport_checksum(p.src.0, p.dst.0, 6, &seg);
    seg[16..18].copy_from_slice(&ck.to_be_bytes());

    let mut frame = eth_header(p.src.0, p.dst.0, 0x0800);
    frame.extend_from_slice(&ipv4_header(p.src.0, p.dst.0, 6, seg.len(), p.ip_id, p.ip_flags));
    frame.extend_from_slice(&seg);
    pad(frame)
}

pub struct UdpParams {
    pub src: (Ipv4Addr, u16),
    pub dst: (Ipv4Addr, u16),
    pub payload_len: usize,
    pub ip_id: u16,
    pub ip_flags: u16,
}

pub fn build_udp(p: &UdpParams) -> Vec<u8> {
    let len = 8 + p.payload_len;
    let mut seg = Vec::with_capacity(len);
    seg.extend_from_slice(&p.src.1.to_be_bytes());
    seg.extend_from_slice(&p.dst.1.to_be_bytes());
    seg.extend_from_slice(&(len as u16).to_be_bytes());
    seg.extend_from_slice(&[0, 0]);
    seg.resize(len, 0);
    let ck = transport_checksum(p.src.0, p.dst.0, 17, &seg);
    seg[6..8].copy_from_slice(&ck.to_be_bytes());

    let mut frame = eth_header(p.src.0, p.dst.0, 0x0800);
    frame.extend_from_slice(&ipv4_header(p.src.0, p.dst.0, 17, seg.len(), p.ip_id, p.ip_flags));
    frame.extend_from_slice(&seg);
    pad(frame)
}

pub struct IcmpParams {
    pub src: Ipv4Addr,
    pub dst: Ipv4Addr,
    pub icmp_type: u8,
    pub id: u16,
    pub seq: u16,
    pub payload_len: usize,
    pub ip_id: u16,
    pub ip_flags: u16,
}

pub fn build_icmp(p: &IcmpParams) -> Vec<u8> {
    let mut seg = Vec::with_capacity(8 + p.payload_len);
    seg.push(p.icmp_type);
    seg.push(0);
    seg.extend_from_slice(&[0, 0]);
    seg.extend_from_slice(&p.id.to_be_bytes());
    seg.extend_from_slice(&p.seq.to_be_bytes());
    seg.resize(8 + p.payload_len, 0);
    let ck = checksum16(&seg);
    seg[2..4].copy_from_slice(&ck.to_be_bytes());

    let mut frame = eth_header(p.src, p.dst, 0x0800);
    frame.extend_from_slice(&ipv4_header(p.src, p.dst, 1, seg.len(), p.ip_id, p.ip_flags));
    frame.extend_from_slice(&seg);
    pad(frame)
}

pub fn build_arp(sender: Ipv4Addr, target: Ipv4Addr, reply: bool) -> Vec<u8> {
    let mut frame = eth_header(sender, target, 0x0806);
    frame.extend_from_slice(&[0x00, 0x01]); // ethernet
    frame.extend_from_slice(&[0x08, 0x00]); // ipv4
    frame.push(6);
    frame.push(4);
    frame.extend_from_slice(&(if reply { 2u16 } else { 1u16 }).to_be_bytes());
    frame.extend_from_slice(&mac_for(sender));
    frame.extend_from_slice(&sender.octets());
    frame.extend_from_slice(&if reply { mac_for(target) } else { [0u8; 6] });
    frame.extend_from_slice(&target.octets());
    pad(frame)
}
