//! Granular-ball rough set (GBRS) feature selection toolkit.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`dataset`] loads and normalizes tabular decision systems,
//! * [`granular_ball`] partitions the universe into label-driven balls,
//! * [`roughset`] computes positive regions (Pawlak, neighborhood, and
//!   granular-ball variants) and runs forward attribute reduction,
//! * [`gbrct`] builds a layered concept tree over a reduct,
//! * [`eval`] benchmarks reducts with kNN cross-validation,
//! * [`cli`] wires everything into the `gbrs` command-line tool.

pub mod cli;
pub mod dataset;
pub mod eval;
pub mod gbrct;
pub mod granular_ball;
pub mod roughset;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum GbrsError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path} at row {row}: {message}")]
    Parse {
        path: String,
        row: usize,
        message: String,
    },
    #[error("empty input file: {0}")]
    EmptyFile(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GbrsError>;
