use thiserror::Error;

use crate::clause::Variable;

/// Errors raised by the library.
///
/// The variants are grouped so a front-end can map them to stable exit
/// codes: input problems, exceeded bounds, violated preconditions and failed
/// internal verification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: tautological clause (variable {variable} occurs in both polarities)")]
    Tautology { line: usize, variable: u32 },

    #[error("literal set is not clash-free (variable {0})")]
    Clash(u32),

    #[error("clauses are not resolvable: {clashes} clashing literal pairs (exactly one required)")]
    NotResolvable { clashes: usize },

    #[error("{what}: {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("variable {0} is not singular")]
    NotSingular(Variable),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}
