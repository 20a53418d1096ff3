//! Crate-wide error type with the exit-code contract used by the CLI.

use thiserror::Error;

/// Errors produced by any operation in this crate.
///
/// Each variant maps to a process exit code so shell-level harnesses can
/// assert failures: 2 = parse, 3 = domain, 4 = inconclusive, 5 = capacity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ordering violation at line {line}: {msg}")]
    Ordering { line: usize, msg: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("inconclusive: {msg}")]
    Inconclusive { msg: String, trace: Vec<(u32, f64)> },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Ordering { .. } | Error::Empty(_) => 2,
            Error::Domain(_) | Error::Quadrature(_) | Error::Io(_) => 3,
            Error::Inconclusive { .. } => 4,
            Error::Capacity(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
