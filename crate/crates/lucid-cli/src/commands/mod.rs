pub mod analyze;
pub mod benchmark;
pub mod evaluate;
pub mod gridsearch;
pub mod predict;
pub mod preprocess;
pub mod split;
pub mod synth;
pub mod train;
