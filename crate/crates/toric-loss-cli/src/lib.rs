//! Std companion to the `toric-loss` core: worker-pool Monte Carlo
//! drivers, stable file formats, and the `toric-loss` command-line tool.

pub mod cli;
pub mod experiment;
pub mod formats;

pub use cli::{run, Cli, CliError};
