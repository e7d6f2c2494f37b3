//! Experiment configuration, dispatch, result tables and checkpoints.

mod checkpoint;
mod config;
mod output;
mod run;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, load_checkpoint_on, save_checkpoint, Checkpoint,
    HEADER_LEN, MAGIC, VERSION,
};
pub use config::{
    load_config, parse_config, BilinearConfig, Experiment, ExperimentConfig, FlatsetConfig, InitialData,
    LongtimeConfig, ResonanceConfig, SimulateConfig, StrichartzConfig, TAGS,
};
pub use output::{fmt_f64, write_atomic, Cell, Csv};
pub use run::{run, RunSummary};
