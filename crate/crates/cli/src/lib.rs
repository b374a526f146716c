//! Command-line front end for the multicarrier power-control game.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod io;
pub mod manifest;

pub use error::{exit, CliError};
