//! Command-line pipeline around the `netsvd` library: generate benchmark
//! data, fit factors, evaluate them, and replay any run from its manifest.
//!
//! All file formats are plain UTF-8 TSV with LF line endings; floating-point
//! values are printed with 17 significant digits so write/read round-trips
//! are lossless. Every command writes a `manifest.json` capturing the exact
//! arguments, and `replay` re-executes a manifest byte-identically.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;
pub mod manifest;

pub use error::{CliError, CliResult};
