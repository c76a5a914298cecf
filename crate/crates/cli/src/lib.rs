//! Command-line front end for `hardy-core`: JSON input formats, reports and
//! the `factor`, `unwind`, `verify` and `wavelet` commands.

pub mod cli;
pub mod error;
pub mod factor;
pub mod formats;
pub mod report;
pub mod unwind;
pub mod verify;
pub mod wavelet;

pub use cli::{run, Cli};
pub use error::{CliError, Result};
