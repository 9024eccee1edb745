//! Campaign driver for the six-vertex sampler: configuration, raw sample
//! files, derived statistics, verification suites and SVG rendering.

pub mod campaign;
pub mod config;
pub mod raw;
pub mod render;
pub mod stats;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("sample {sample}: {msg}")]
    Invariant { sample: u64, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] sixv_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
