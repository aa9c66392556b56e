//! Scenario catalog, configuration, output formats and report generators for
//! the Green-Naghdi central DG solver in `gncdg-core`.

pub mod config;
pub mod error;
pub mod gauges;
pub mod output;
pub mod report;
pub mod run;
pub mod scenario;

pub use config::{ConfigFile, Overrides, RunConfig};
pub use error::{AppError, Result};
