//! Experiment orchestration: specs, execution and output files.

pub mod experiment;
pub mod output;
pub mod runner;
pub mod stats;

pub use experiment::{load_experiment, ExperimentSpec, Mode, SweepPoint};
pub use output::{emit_outputs, Manifest};
pub use runner::{run_experiment, Algorithm, ExperimentOutput, SummaryRecord};
