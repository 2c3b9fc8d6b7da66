use crate::flow::key::FlowKey;

/// Ground-truth class of a flow sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Benign,
    Ddos,
    Unlabeled,
}

impl Label {
    /// Wire encoding: 0 benign, 1 ddos, 255 unlabeled.
    pub fn to_byte(self) -> u8 {
        match self {
            Label::Benign => 0,
            Label::Ddos => 1,
            Label::Unlabeled => 255,
        }
    }

    pub fn from_byte(b: u8) -> Option<Label> {
        match b {
            0 => Some(Label::Benign),
            1 => Some(Label::Ddos),
            255 => Some(Label::Unlabeled),
            _ => None,
        }
    }
}

/// One normalized sample: an `n x f` matrix of values in [0, 1], row-major,
/// with rows past `pkt_count` left as zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub key: FlowKey,
    /// Window start time (seconds).
    pub window_start: f64,
    /// Number of real packet rows; the rest is padding.
    pub pkt_count: u16,
    pub label: Label,
    pub matrix: Vec<f32>,
}

impl FlowSample {
    pub fn row(&self, i: usize, f: usize) -> &[f32] {
        &self.matrix[i * f..(i + 1) * f]
    }
}
