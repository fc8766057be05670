//! Configuration, subcommands and report writing for the `anosovlab` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
