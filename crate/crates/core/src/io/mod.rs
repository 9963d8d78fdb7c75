//! Configuration, snapshot files, Schlieren shading, error metrics and the
//! run driver.

pub mod config;
pub mod driver;
pub mod metrics;
pub mod schlieren;
pub mod snapshot;

pub use config::{parse_config, OutputFormat, RunConfig};
pub use driver::{convergence, reference, run, RunReport};
pub use snapshot::Snapshot;
