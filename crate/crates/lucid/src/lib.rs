//! Flow-based DDoS detection on packet captures.
//!
//! The pipeline turns raw pcap traces into fixed-shape per-flow samples
//! (one `n x f` matrix per traffic flow per time window), trains a compact
//! convolutional classifier on them, and evaluates or explains the result:
//!
//! * [`pcap`]: classic libpcap reader and per-packet attribute extraction
//! * [`flow`]: window/flow grouping, normalization, labelling, dataset
//!   container, split and class balancing
//! * [`cnn`]: the classifier (forward pass, backpropagation, Adam,
//!   training loop with early stopping, checkpointing, grid search)
//! * [`metrics`]: confusion-matrix accounting and derived scores
//! * [`analysis`]: kernel-activation feature ranking for explainability
//! * [`synth`]: deterministic synthetic traffic generator for testing

pub mod analysis;
pub mod cnn;
pub mod error;
pub mod flow;
pub mod metrics;
pub mod pcap;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;
