//! Library backing the `allee` command-line binary.
//!
//! The binary itself (`src/main.rs`) only parses arguments and maps the
//! outcome to an exit code; everything else lives here so integration tests
//! can exercise the output formats directly:
//!
//! * [`format`] - the line-oriented structured text format (self-describing
//!   header block plus CSV body) used by every machine-readable output;
//! * [`svg`] - a small deterministic SVG plot emitter (no plotting
//!   dependency);
//! * [`presets`] - the figure presets (`F02`, `F04a`, ..., `F10b`) that pin
//!   parameter values for reproducible runs;
//! * [`cli`] - argument definitions and the subcommand implementations.
//!
//! Exit-code contract: `0` success, `1` verification failure, `2` validation
//! error, `3` I/O error, `4` numeric procedure failure.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod fsio;
pub mod presets;
pub mod svg;

pub use error::{CliError, CliResult};
