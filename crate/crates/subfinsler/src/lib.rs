//! Problem files, reports and the `subfinsler` command-line tool built on
//! [`subfinsler_core`].

pub mod commands;
mod error;
pub mod problem;
pub mod report;

pub use error::{CliError, Result};
