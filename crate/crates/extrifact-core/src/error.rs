//! Error taxonomy: input, capability, precondition and internal errors.
//!
//! `Input` covers malformed documents, unknown labels and bad literals and
//! maps to CLI exit code 2. `Capability` is the dims-only tier refusing a
//! realization-dependent operation. `Precondition` is a well-formed request
//! whose mathematical precondition fails (e.g. factorizing a non-inflation).
//! `Internal` marks states the invariants rule out; reaching one is a bug.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: documents, labels, literals, flag values.
    #[error("input error: {0}")]
    Input(String),

    /// Operation needs a full model but the presentation is dims-only.
    #[error("capability error: {op} requires a full-model presentation")]
    Capability { op: &'static str },

    /// Structurally valid request whose precondition fails.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// Invariant violation; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
