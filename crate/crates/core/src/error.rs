use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the mathematical domain of an operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A denominator or other quantity collapsed below the working precision.
    #[error("numeric singularity: {0}")]
    Singularity(String),

    /// Training produced a non-finite loss.
    #[error("numeric divergence: {0}")]
    Divergence(String),

    /// Malformed input file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Invalid configuration value or key.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Structurally invalid input (ids out of range, bad shapes, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Bad magic, version or layout in a binary container.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
