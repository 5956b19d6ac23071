//! Experiment runner behind the `flowsmooth` binary: declarative JSON
//! configs in, deterministic CSV reports out.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::ExperimentConfig;
pub use experiment::{run_experiment, ExperimentOutcome, RunError, SamplerSummary};
