//! Command-line front end: expression parsing, canonical serialization and
//! command dispatch over the `integrabilis-core` kernel.

pub mod commands;
pub mod error;
pub mod parse;
pub mod serial;

pub use commands::{run, run_command, Cli, Command};
pub use error::CliError;
