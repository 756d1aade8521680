//! File format, reports and subcommands for the `ainf` binary.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run, Cli, CliError, Command};
pub use format::{parse, print, CategoryFile, ParseError, ParseErrorKind};
pub use report::Report;
