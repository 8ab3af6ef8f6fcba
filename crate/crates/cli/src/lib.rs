//! Sweep driver, figure presets and self-test behind the `ssop` binary.

pub mod config;
pub mod error;
pub mod format;
pub mod presets;
pub mod selftest;
pub mod sweep;
pub mod tables;

pub use error::{CliError, Result};
