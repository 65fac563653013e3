//! Seeded experiments over a fixed host: configuration, presets and the
//! trial runner.

pub mod config;
pub mod run;

pub use config::{auto_p, parse_config, preset, Check, ConfigError, ExperimentConfig, HostSource, Overrides, PValues};
pub use run::{fmt_g9, run_experiment, run_experiment_with, Execution, ExperimentError, ExperimentOutcome, ExperimentRecord};
