use std::net::Ipv4Addr;

use byteorder::{BigEndian, ByteOrder};

use super::record::{Layer, PacketRecord};

const ETHERTYPE_IPV4: u16 = 0x0800;
const ETHERTYPE_ARP: u16 = 0x0806;
const ETHERTYPE_VLAN: u16 = 0x8100;
const ETHERTYPE_IPV6: u16 = 0x86dd;

/// Why a frame was rejected; callers keep separate counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Skip {
    Ipv6,
    Other,
}

/// Well-known service ports used to tag the application layer.
///
/// The tag is only applied to packets that actually carry transport
/// payload, so bare handshake segments stay at the transport layer.
fn app_layer(port_a: u16, port_b: u16) -> Option<Layer> {
    fn by_port(port: u16) -> Option<Layer> {
        match port {
            53 => Some(Layer::Dns),
            80 | 8080 => Some(Layer::Http),
            443 => Some(Layer::Tls),
            21 => Some(Layer::Ftp),
            22 => Some(Layer::Ssh),
            25 => Some(Layer::Smtp),
            23 => Some(Layer::Telnet),
            6667 => Some(Layer::Irc),
            _ => None,
        }
    }
    by_port(port_b).or_else(|| by_port(port_a))
}

/// Dissects one Ethernet frame into a `PacketRecord`.
///
/// `data` is the captured slice (possibly shorter than the wire length when
/// a snaplen was in effect); header fields outside the captured bytes make
/// the frame undissectable.
pub fn dissect_frame(ts: f64, data: &[u8], wire_len: u32) -> Result<PacketRecord, Skip> {
    if data.len() < 14 {
        return Err(Skip::Other);
    }
    let mut ethertype = BigEndian::read_u16(&data[12..14]);
    let mut offset = 14;
    if ethertype == ETHERTYPE_VLAN {
        if data.len() < 18 {
            return Err(Skip::Other);
        }
        ethertype = BigEndian::read_u16(&data[16..18]);
        offset = 18;
    }

    let mut rec = PacketRecord::blank(ts, wire_len);
    rec.layers.push(Layer::Eth);

    match ethertype {
        ETHERTYPE_IPV4 => dissect_ipv4(&mut rec, &data[offset..]).map(|()| rec),
        ETHERTYPE_ARP => dissect_arp(&mut rec, &data[offset..]).map(|()| rec),
        ETHERTYPE_IPV6 => Err(Skip::Ipv6),
        _ => Err(Skip::Other),
    }
}

fn dissect_ipv4(rec: &mut PacketRecord, data: &[u8]) -> Result<(), Skip> {
    if data.len() < 20 {
        return Err(Skip::Other);
    }
    let version = data[0] >> 4;
    let ihl = (data[0] & 0x0f) as usize * 4;
    if version != 4 || ihl < 20 || data.len() < ihl {
        return Err(Skip::Other);
    }
    let total_len = BigEndian::read_u16(&data[2..4]);
    if (total_len as usize) < ihl {
        return Err(Skip::Other);
    }
    rec.ip_total_len = total_len;
    rec.ip_flags_word = BigEndian::read_u16(&data[6..8]);
    rec.proto = data[9];
    rec.src_ip = Ipv4Addr::new(data[12], data[13], data[14], data[15]);
    rec.dst_ip = Ipv4Addr::new(data[16], data[17], data[18], data[19]);
    rec.layers.push(Layer::Ip);

    // Later fragments carry no transport header; keep them as plain IP.
    let frag_offset = rec.ip_flags_word & 0x1fff;
    if frag_offset > 0 {
        return Ok(());
    }

    let transport = &data[ihl..];
    match rec.proto {
        6 => dissect_tcp(rec, transport, total_len as usize - ihl),
        17 => dissect_udp(rec, transport),
        1 => dissect_icmp(rec, transport),
        _ => Ok(()), // other IP protocols form flows with ports 0
    }
}

fn dissect_tcp(rec: &mut PacketRecord, data: &[u8], segment_len: usize) -> Result<(), Skip> {
    if data.len() < 20 {
        return Err(Skip::Other);
    }
    rec.src_port = BigEndian::read_u16(&data[0..2]);
    rec.dst_port = BigEndian::read_u16(&data[2..4]);
    rec.tcp_ack = BigEndian::read_u32(&data[8..12]);
    let data_offset = (data[12] >> 4) as usize * 4;
    if data_offset < 20 || segment_len < data_offset {
        return Err(Skip::Other);
    }
    // 9-bit flag field: NS lives in the low bit of the offset byte.
    rec.tcp_flags = (((data[12] & 0x01) as u16) << 8) | data[13] as u16;
    rec.tcp_win = BigEndian::read_u16(&data[14..16]);
    rec.tcp_payload_len = (segment_len - data_offset) as u16;
    rec.layers.push(Layer::Tcp);
    if rec.tcp_payload_len > 0 {
        if let Some(app) = app_layer(rec.src_port, rec.dst_port) {
            rec.layers.push(app);
        }
    }
    Ok(())
}

fn dissect_udp(rec: &mut PacketRecord, data: &[u8]) -> Result<(), Skip> {
    if data.len() < 8 {
        return Err(Skip::Other);
    }
    rec.src_port = BigEndian::read_u16(&data[0..2]);
    rec.dst_port = BigEndian::read_u16(&data[2..4]);
    let len_field = BigEndian::read_u16(&data[4..6]);
    if len_field < 8 {
        return Err(Skip::Other);
    }
    rec.udp_payload_len = len_field - 8;
    rec.layers.push(Layer::Udp);
    if rec.udp_payload_len > 0 {
        if let Some(app) = app_layer(rec.src_port, rec.dst_port) {
            rec.layers.push(app);
        }
    }
    Ok(())
}

fn dissect_icmp(rec: &mut PacketRecord, data: &[u8]) -> Result<(), Skip> {
    if data.len() < 4 {
        return Err(Skip::Other);
    }
    rec.icmp_type = data[0];
    rec.layers.push(Layer::Icmp);
    Ok(())
}

/// ARP over IPv4: the sender/target protocol addresses stand in for the
/// IP endpoints so that ARP exchanges can still be grouped and labelled
/// as flows (protocol number 0, ports 0).
fn dissect_arp(rec: &mut PacketRecord, data: &[u8]) -> Result<(), Skip> {
    if data.len() < 28 {
        return Err(Skip::Other);
    }
    let htype = BigEndian::read_u16(&data[0..2]);
    let ptype = BigEndian::read_u16(&data[2..4]);
    if htype != 1 || ptype != ETHERTYPE_IPV4 || data[4] != 6 || data[5] != 4 {
        return Err(Skip::Other);
    }
    rec.src_ip = Ipv4Addr::new(data[14], data[15], data[16], data[17]);
    rec.dst_ip = Ipv4Addr::new(data[24], data[25], data[26], data[27]);
    rec.layers.push(Layer::Arp);
    Ok(())
}
