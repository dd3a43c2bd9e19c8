//! Command-line front end for the dolha streaming-graph stores: stream
//! replay, batch queries, fixture-layout table dumps, synthetic stream
//! generation, and a small benchmark harness.
//!
//! The pieces live in library modules so integration and acceptance
//! tests can drive them directly; `main.rs` is a thin argument shim.

pub mod bench;
pub mod driver;
pub mod gen;
pub mod queries;
pub mod report;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] dolha_core::model::StreamParseError),
    #[error("{0}")]
    HashFixture(#[from] dolha_core::hash::FixtureParseError),
    #[error("{0}")]
    Pattern(#[from] dolha_core::analytics::PatternParseError),
    #[error("{0}")]
    Store(#[from] dolha_core::Error),
    #[error("processing event `{event}`: {source}")]
    StoreAt {
        event: String,
        #[source]
        source: dolha_core::Error,
    },
    #[error("{0}")]
    BadArgs(String),
}

pub fn read_to_string(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
