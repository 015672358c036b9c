//! Command-line front end of the generator: config files, graph file
//! formats, reports, and the three commands behind the `gencat` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use error::{CliError, CliResult, EXIT_WARNINGS};
