//! Command-line front end and HTTP play service for `noisy-games`.

pub mod args;
pub mod commands;
pub mod server;

pub use args::Cli;
pub use commands::{run, CliError, Outcome};
