//! Time-window preprocessing: packets → per-(window, flow) samples →
//! normalized fixed-shape matrices → labelled, split, balanced datasets.

mod dataset;
mod key;
mod labels;
mod normalize;
mod sample;
mod split;
mod window;

pub use dataset::{Dataset, DATASET_MAGIC, DATASET_VERSION};
pub use key::{Endpoint, FlowKey};
pub use labels::{apply_labels, LabelOutcome, LabelSet, LABEL_CSV_HEADER};
pub use normalize::{normalize_and_pad, NormalizationSpec, NormalizeOutcome};
pub use sample::{FlowSample, Label};
pub use split::{balance, split_dataset, SplitRatios};
pub use window::{build_samples, RawSample, SampleMap};
