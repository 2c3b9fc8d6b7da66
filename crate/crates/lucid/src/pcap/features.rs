use super::record::PacketRecord;

/// Number of per-packet attributes in a feature row.
pub const FEATURE_COUNT: usize = 11;

/// Feature column names, in matrix column order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "time",
    "pkt_len",
    "highest_layer",
    "ip_flags",
    "protocols",
    "tcp_len",
    "tcp_ack",
    "tcp_flags",
    "tcp_win",
    "udp_len",
    "icmp_type",
];

/// Fixed, ordered set of protocol names the encoder recognises.
///
/// Bit `i` of the `protocols` bag-of-words value corresponds to entry `i`;
/// the `highest_layer` code for entry `i` is `i + 1` (0 is reserved for
/// padding rows). The registry is immutable for the lifetime of a dataset:
/// both encodings are positional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRegistry {
    names: Vec<&'static str>,
}

impl Default for ProtocolRegistry {
    fn default() -> Self {
        ProtocolRegistry {
            names: vec![
                "arp", "ip", "icmp", "tcp", "udp", "dns", "http", "tls", "ftp", "ssh", "smtp",
                "telnet", "irc",
            ],
        }
    }
}

impl ProtocolRegistry {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| *n == name)
    }

    /// Largest possible bag-of-words value: all bits set.
    pub fn bitmask_max(&self) -> u32 {
        (1u32 << self.names.len()) - 1
    }
}

/// The 11 encoded attributes of one packet.
///
/// `time` starts out as the absolute capture timestamp; the windowing
/// stage rewrites it relative to the first packet of the flow within the
/// current time window. Attributes of protocols the packet does not carry
/// are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketFeatures {
    pub time: f64,
    pub pkt_len: u32,
    pub highest_layer: u8,
    pub ip_flags: u16,
    pub protocols: u16,
    pub tcp_len: u16,
    pub tcp_ack: u32,
    pub tcp_flags: u16,
    pub tcp_win: u16,
    pub udp_len: u16,
    pub icmp_type: u8,
}

impl PacketFeatures {
    pub fn to_row(&self) -> [f64; FEATURE_COUNT] {
        [
            self.time,
            self.pkt_len as f64,
            self.highest_layer as f64,
            self.ip_flags as f64,
            self.protocols as f64,
            self.tcp_len as f64,
            self.tcp_ack as f64,
            self.tcp_flags as f64,
            self.tcp_win as f64,
            self.udp_len as f64,
            self.icmp_type as f64,
        ]
    }
}

/// Encodes a packet record into its feature row.
///
/// The protocols bit vector gets one bit per registry entry present in the
/// packet's layer stack, and `highest_layer` is the 1-based registry code
/// of the deepest matching layer. Addresses, ports and payload bytes never
/// enter the feature row.
pub fn dissect(pkt: &PacketRecord, registry: &ProtocolRegistry) -> PacketFeatures {
    let mut protocols = 0u16;
    let mut highest = 0u8;
    for layer in &pkt.layers {
        if let Some(idx) = registry.index_of(layer.name()) {
            protocols |= 1 << idx;
            highest = idx as u8 + 1;
        }
    }
    PacketFeatures {
        time: pkt.ts,
        pkt_len: pkt.wire_len,
        highest_layer: highest,
        ip_flags: pkt.ip_flags_word,
        protocols,
        tcp_len: pkt.tcp_payload_len,
        tcp_ack: pkt.tcp_ack,
        tcp_flags: pkt.tcp_flags,
        tcp_win: pkt.tcp_win,
        udp_len: pkt.udp_payload_len,
        icmp_type: pkt.icmp_type,
    }
}
