//! Batch front end for the `wetplan-core` experiments: TOML configuration,
//! deterministic CSV output, run manifests and plot data.

pub mod config;
mod error;
pub mod experiments;
pub mod manifest;
pub mod plot;
pub mod run;

pub use error::{Error, Result};
