//! Experiment drivers behind the `zerofilter` binary and the examples.

mod config;
mod report;
mod runs;

pub use config::{parse_config, parse_config_str, ExperimentConfig, SweepDatum};
pub use report::{csv_body, Report};
pub use runs::*;
