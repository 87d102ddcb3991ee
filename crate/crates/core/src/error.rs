use std::fmt;

use thiserror::Error;

/// Which half of a directed hyperedge a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tail,
    Head,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Tail => f.write_str("tail (out-degree)"),
            Side::Head => f.write_str("head (in-degree)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree sum mismatch on the {side} side: degrees sum to {degrees}, profile requires {profile}")]
    SumMismatch {
        side: Side,
        degrees: usize,
        profile: usize,
    },

    #[error("profile entry (tail={tail}, head={head}) has an empty side; every hyperedge needs a nonempty tail and a nonempty head")]
    EmptySide { tail: usize, head: usize },

    #[error("zero mass: M+ = {plus}, M- = {minus}; both must be positive")]
    ZeroMass { plus: usize, minus: usize },

    #[error("hyperedge profile is empty")]
    EmptyProfile,

    #[error("profile entry (tail={tail}, head={head}) has count 0; counts must be positive")]
    ZeroCount { tail: usize, head: usize },

    #[error("profile entry (tail={tail}, head={head}) appears more than once")]
    DuplicateProfile { tail: usize, head: usize },

    #[error("{what} has length {len}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        len: usize,
        expected: usize,
    },

    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid hyperedge: {0}")]
    InvalidEdge(String),

    #[error("repeated hyperedge: {0}")]
    RepeatedEdge(String),

    #[error("invalid bipartite graph: {0}")]
    InvalidGraph(String),

    #[error("work budget of {budget} node expansions exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("instance too large for exact enumeration: {0}")]
    TooLarge(String),

    #[error("labelled count {labelled} is not divisible by {divisor}")]
    NotDivisible { labelled: String, divisor: String },

    #[error("exact counting routes disagree on {what}: {left} vs {right}")]
    RouteMismatch {
        what: &'static str,
        left: String,
        right: String,
    },

    #[error("empty ensemble: {0}")]
    EmptyEnsemble(String),

    #[error("edge prefix cannot be extended to a graph with the target degrees")]
    InvalidPrefix,

    #[error("sampler reached a state with no extendable edge")]
    DeadEnd,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no acceptable sample after {0} rejections")]
    RejectBudgetExceeded(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input documents.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::SumMismatch { .. }
                | Error::EmptySide { .. }
                | Error::ZeroMass { .. }
                | Error::EmptyProfile
                | Error::ZeroCount { .. }
                | Error::DuplicateProfile { .. }
                | Error::LengthMismatch { .. }
                | Error::VertexOutOfRange { .. }
                | Error::InvalidEdge(_)
                | Error::RepeatedEdge(_)
                | Error::InvalidGraph(_)
                | Error::Parse(_)
        )
    }

    /// True for errors signalling that a work or rejection budget ran out.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::RejectBudgetExceeded(_) | Error::TooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
