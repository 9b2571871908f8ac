//! Ingestion, splitting and benchmark data generation.

mod dataset;
mod mackey_glass;
mod synth;

pub use dataset::{load_csv, load_inputs_csv, shuffle_indices, split, Dataset};
pub use mackey_glass::{
    embed, embed_default, load_series_csv, mackey_glass, mg_rate, save_series_csv, MgConfig, MgSeries,
};
pub use synth::{synth_benchmark, synth_function, GridSpec, SYNTH_NOTE};
