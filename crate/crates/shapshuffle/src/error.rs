//! Error type shared across the library and the CLI.
//!
//! Variants are grouped by how the CLI reports them: data problems (bad
//! schema, malformed rows, I/O) exit with code 2, capability and numeric
//! failures exit with code 3, and configuration misuse exits with code 1.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for dataset handling, attacks, attribution and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// The schema file is invalid or does not match the data.
    #[error("schema error: {0}")]
    Schema(String),

    /// A data row could not be parsed. `row` is 1-based and excludes the header.
    #[error("parse error at data row {row}: {message}")]
    Parse { row: usize, message: String },

    /// Shapes of two inputs that must agree do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The request is valid but outside what the implementation supports
    /// (for example exact attribution beyond the feature-count limit).
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Model fitting could not proceed (missing labels, degenerate split, ...).
    #[error("fit error: {0}")]
    Fit(String),

    /// A numeric routine failed to produce a usable result.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A parameter is outside its documented range or options conflict.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
