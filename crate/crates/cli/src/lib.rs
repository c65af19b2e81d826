//! Command-line front end for `kmono-core`: section files, reports and the
//! subcommand implementations.

pub mod cli;
pub mod commands;
pub mod format;
pub mod report;

pub use cli::Cli;
pub use commands::{run, CliError};
pub use format::SectionFile;
pub use report::Report;
