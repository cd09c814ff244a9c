//! Command-line front end: parameter sweeps written as CSV, a result cache
//! and the acceptance self-test.

pub mod acceptance;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod table;

pub use config::{Args, Command, RunConfig};
pub use error::CliError;

/// Part of every cache key, so results from other builds are never reused.
pub const CODE_VERSION: &str = concat!("antikz-", env!("CARGO_PKG_VERSION"));
