//! Experiment driver for the TRTC max-min beamforming solvers: JSON
//! experiment specs, parallel trial execution and CSV / JSON result files.

pub mod error;
pub mod output;
pub mod runner;
pub mod spec;

pub use error::{BenchError, Result};
pub use output::{emit, parse_csv, parse_json, Format, ResultRow};
pub use runner::{mean_by_axis, run_experiment};
pub use spec::{Algorithm, ExperimentSpec, SweepAxis};
