//! Batch driver behind the `tomobell` binary: parameter sweeps, threshold
//! searches, single-state evaluation, CSV records and SVG plots.

pub mod error;
pub mod eval;
pub mod plot;
pub mod records;
pub mod sweep;
pub mod threshold;

pub use error::{CliError, ExitCode};
