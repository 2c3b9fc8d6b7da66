use std::net::Ipv4Addr;

/// Protocol layers the dissector can recognise inside a frame, ordered
/// from link layer to application layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    Eth,
    Arp,
    Ip,
    Icmp,
    Tcp,
    Udp,
    Dns,
    Http,
    Tls,
    Ftp,
    Ssh,
    Smtp,
    Telnet,
    Irc,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Eth => "eth",
            Layer::Arp => "arp",
            Layer::Ip => "ip",
            Layer::Icmp => "icmp",
            Layer::Tcp => "tcp",
            Layer::Udp => "udp",
            Layer::Dns => "dns",
            Layer::Http => "http",
            Layer::Tls => "tls",
            Layer::Ftp => "ftp",
            Layer::Ssh => "ssh",
            Layer::Smtp => "smtp",
            Layer::Telnet => "telnet",
            Layer::Irc => "irc",
        }
    }
}

/// One accepted packet: addressing for flow grouping plus the raw header
/// fields that feature extraction reads.
///
/// Port fields are 0 when the transport has no ports (ICMP, ARP, IP
/// fragments); transport fields that do not apply to the packet's protocol
/// are left at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketRecord {
    /// Capture timestamp, seconds since the epoch (microsecond or
    /// nanosecond resolution depending on the capture variant).
    pub ts: f64,
    pub src_ip: Ipv4Addr,
    pub dst_ip: Ipv4Addr,
    pub src_port: u16,
    pub dst_port: u16,
    /// IP protocol number; 0 for non-IP packets (ARP).
    pub proto: u8,
    /// Dissected layer stack in wire order, e.g. `[eth, ip, tcp, http]`.
    pub layers: Vec<Layer>,
    /// Original (wire) frame length from the capture record header.
    pub wire_len: u32,
    /// IPv4 total-length header field.
    pub ip_total_len: u16,
    /// IPv4 flags + fragment-offset word (3 flag bits, 13 offset bits).
    pub ip_flags_word: u16,
    /// TCP payload bytes (total length minus IP and TCP headers).
    pub tcp_payload_len: u16,
    pub tcp_ack: u32,
    /// 9-bit TCP flag field (NS plus the classic 8 bits).
    pub tcp_flags: u16,
    pub tcp_win: u16,
    /// UDP payload bytes (length field minus the 8-byte header).
    pub udp_payload_len: u16,
    pub icmp_type: u8,
}

impl PacketRecord {
    /// A record with all fields zeroed, used by the dissector as a base.
    pub(crate) fn blank(ts: f64, wire_len: u32) -> Self {
        PacketRecord {
            ts,
            src_ip: Ipv4Addr::UNSPECIFIED,
            dst_ip: Ipv4Addr::UNSPECIFIED,
            src_port: 0,
            dst_port: 0,
            proto: 0,
            layers: Vec::new(),
            wire_len,
            ip_total_len: 0,
            ip_flags_word: 0,
            tcp_payload_len: 0,
            tcp_ack: 0,
            tcp_flags: 0,
            tcp_win: 0,
            udp_payload_len: 0,
            icmp_type: 0,
        }
    }

    pub fn has_layer(&self, layer: Layer) -> bool {
        self.layers.contains(&layer)
    }
}
