//! Suite runner for the `hardy` binary.

pub mod builtin;
pub mod config;
pub mod resolve;
pub mod runner;

pub use config::{RunSpec, SuiteConfig, TAGS};
pub use runner::{run_suite, RunOptions, RunRecord, Status, SuiteOutcome};
