//! Library side of the `qfp` command-line tool.

pub mod commands;
pub mod config;
pub mod report;
pub mod sweep;

pub use config::ExperimentConfig;
