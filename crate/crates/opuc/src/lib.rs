//! Command-line runner and artifact layer for [`opuc_core`].
//!
//! [`commands::run`] executes an [`ExperimentConfig`] and reports an exit
//! code: 0 pass, 1 property violation, 2 configuration error,
//! 3 inconclusive classification, 4 I/O or numerical failure. Every artifact
//! is a CSV file whose `#` lines echo the version and configuration.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod verify;

pub use commands::{run, Outcome};
pub use config::ExperimentConfig;
pub use error::{exit, CliError, Result};
