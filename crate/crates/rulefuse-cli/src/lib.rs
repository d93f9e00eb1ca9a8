//! Library surface of the rulefuse CLI, exposed so integration tests can
//! drive the commands in-process.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod synth;
pub mod util;

pub use error::{CliError, Result};
