//! Command-line driver: configuration, the verification suite and its report.

pub mod config;
pub mod report;
pub mod suite;

pub use config::{CatalogSource, ConfigError, HeckeCheck, RunConfig, Target};
pub use report::{Aggregate, Failure, Report};
pub use suite::{load_catalog, run_suite};
