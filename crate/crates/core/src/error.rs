//! Error type shared by the library.

use crate::action::CommutationViolation;

/// Errors produced while reading inputs or building complexes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    /// Semantic input errors: unknown names, duplicates, out-of-range
    /// references. The message carries the offending location.
    #[error("invalid input: {0}")]
    Input(String),

    /// The transition table breaks commutation for at least one
    /// independent event pair; the action is not well defined.
    #[error("system fails commutation validation ({} violation(s))", .0.len())]
    Validation(Vec<CommutationViolation>),

    #[error("{what} exceeds the supported limit ({actual} > {limit})")]
    CapExceeded {
        what: String,
        limit: usize,
        actual: usize,
    },

    /// The transition graph has a directed cycle, so the morphism set
    /// between some state pair is infinite and the nerve cannot be built.
    #[error("transition graph is cyclic (through state {state:?}); nerve would be infinite")]
    Cyclic { state: String },

    /// A boundary tuple fell outside the lower-degree basis. This cannot
    /// happen for a validated system analyzed over all states or over a
    /// reachability-closed scope; it indicates a scope that is not closed
    /// under the action (or an internal bug).
    #[error("boundary face {face} of degree-{degree} column {column} is missing from the basis")]
    MissingBoundaryFace {
        degree: usize,
        column: String,
        face: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
