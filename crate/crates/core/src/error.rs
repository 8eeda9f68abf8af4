use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::Violation;
use crate::Vertex;

/// Failures reported by the solver library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The instance breaks one or more structural invariants.
    InvalidInstance(Vec<Violation>),
    /// The instance has more fault vertices than the routine supports.
    EngineLimit { n: usize, limit: usize },
    /// A vertex label outside `1..=n`.
    UnknownVertex(Vertex),
    /// A visiting order that is not a permutation of the fault vertices.
    NotAPermutation(String),
    /// Partial order with repeated or out-of-range vertices.
    InvalidPrefix(String),
    /// Integer arithmetic left the supported range.
    Overflow(&'static str),
    /// The lower bound `L_i^k` is only defined for `k > n - |S_i|`.
    BoundNotApplicable { vertex: Vertex, position: usize },
    InvalidConfig(&'static str),
    /// The label store grew beyond the configured cap in exact mode.
    LabelCapExceeded { cap: usize, level: usize },
    /// A model assignment is missing values or has the wrong shape.
    InvalidAssignment(String),
    /// Broken internal invariant; always a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInstance(violations) => {
                write!(f, "invalid instance:")?;
                for v in violations {
                    write!(f, "\n  - {v}")?;
                }
                Ok(())
            }
            Error::EngineLimit { n, limit } => {
                write!(f, "instance has {n} fault vertices, this routine supports at most {limit}")
            }
            Error::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            Error::NotAPermutation(msg) => write!(f, "order is not a permutation: {msg}"),
            Error::InvalidPrefix(msg) => write!(f, "invalid partial order: {msg}"),
            Error::Overflow(what) => write!(f, "arithmetic overflow in {what}"),
            Error::BoundNotApplicable { vertex, position } => write!(
                f,
                "bound not applicable: vertex {vertex} at position {position} has no precedence slack"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid solver configuration: {msg}"),
            Error::LabelCapExceeded { cap, level } => {
                write!(f, "label cap of {cap} exceeded at level {level}")
            }
            Error::InvalidAssignment(msg) => write!(f, "invalid assignment: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
