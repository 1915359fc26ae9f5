//! File formats, Monte Carlo harness and command-line front end for the
//! best-arm identification laboratory built on [`bestarm_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod report;
pub mod schema;

pub use config::{ExperimentConfig, GeneratorSpec, InstanceSource};
pub use error::HarnessError;
pub use harness::{
    compare_suite, entropy_scaling_probe, run_trials, run_trials_with, Comparison, ProbeReport,
    ProbeRow, RunSettings, TrialSummary,
};
