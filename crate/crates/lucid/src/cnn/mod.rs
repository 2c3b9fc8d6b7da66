//! The convolutional classifier and its training machinery.

mod adam;
mod checkpoint;
mod grad;
mod gridsearch;
mod loss;
mod model;
mod train;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{checkpoint_size, load_model, save_model, MODEL_MAGIC, MODEL_VERSION};
pub use grad::{backward, Gradients};
pub use gridsearch::{dataset_path, grid_search, GridOutcome, GridPoint, GridScore};
pub use loss::{bce_loss, BCE_EPSILON};
pub use model::{classify, init_model, ForwardCache, Hyper, ModelParams};
pub use train::{train, EpochStats, Examples, TrainConfig, TrainHistory};
