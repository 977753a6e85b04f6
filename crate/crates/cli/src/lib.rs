//! Configuration, sweeps, reports and plots behind the `qpdiff` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

pub use config::{Format, GridSpec, RunConfig, VertexSpec};
pub use error::CliError;
pub use output::FieldRecord;
