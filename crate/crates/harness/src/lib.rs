//! Experiment harness for the tangent-vqe laboratory.
//!
//! Reads a TOML experiment description, runs the solvers and emits CSV
//! tables, plain-text summaries and SVG plots.

pub mod config;
pub mod error;
pub mod experiments;
pub mod records;
pub mod stats;
pub mod svg;
pub mod systems;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
