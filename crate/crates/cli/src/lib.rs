//! Reproduction commands for the fractional Stefan front-fixing solver.
//!
//! Every command returns a [`Report`]: the rendered CSV or JSON document and
//! whether all requested cells succeeded. `main.rs` only parses flags and
//! writes the report.

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;

pub use commands::Report;
pub use config::{OutputFormat, PhiChoice, RunConfig, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Solver(#[from] fstefan::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
