//! File formats and the command-line front end for `horo-core`.
//!
//! The binary is a thin wrapper over [`cli::run`]; see [`format`] for the
//! input layouts it accepts.

pub mod cli;
pub mod format;
