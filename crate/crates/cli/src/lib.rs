//! Scenario runner for natural lift verification: reads a TOML scenario,
//! samples phase-space points, evaluates the requested suites and emits a
//! JSON or text report.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod sampling;
pub mod suites;

pub use config::{Scenario, Suite};
pub use error::ConfigError;
pub use report::{Format, VerificationReport};
pub use run::run_scenario;
