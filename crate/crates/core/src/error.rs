//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by validation, grid construction, and the grid oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// One or more model-parameter constraints are violated.
    #[error("invalid parameters: {}", violations.join("; "))]
    InvalidParams {
        /// Human-readable description of every violated inequality.
        violations: Vec<String>,
    },

    /// A signal accuracy lies outside `[0, 1]`.
    #[error("invalid signal policy: {0}")]
    InvalidPolicy(String),

    /// A sweep or region grid is malformed.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// No policy on the grid satisfies the deterrence constraint.
    ///
    /// Cannot occur for rules derived from validated parameters (the fully
    /// revealing corner always deters), but guards pathological custom rules
    /// and keeps the oracle's contract total.
    #[error("no feasible policy on the grid")]
    EmptyFeasibleSet,
}

impl Error {
    pub(crate) fn invalid_grid(msg: impl Into<String>) -> Self {
        Error::InvalidGrid(msg.into())
    }
}
