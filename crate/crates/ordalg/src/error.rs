//! Crate-wide error type.
//!
//! Domain errors carry the clause names that the CLI reports verbatim;
//! malformed input is kept separate so the exit-code contract (1 = domain
//! error, 2 = parse error) is easy to honor.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("points are not ordered: expected p < q")]
    NotOrdered,

    #[error("{coord} is not doubled in this presentation")]
    NotDoubled { coord: String },

    #[error("invalid point {point}: {reason}")]
    InvalidPoint { point: String, reason: String },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("restriction to the empty set")]
    EmptyRestriction,

    #[error("solid segments carry no step-function calculus")]
    SolidUnsupported,

    #[error("does not factor through ∼")]
    DoesNotFactor,

    #[error("S too sparse: gap ({lo}, {hi}) contains no pair of S")]
    STooSparse { lo: String, hi: String },

    #[error("b hits the range: Re(value) = {b}")]
    BHitsRange { b: String },

    #[error("hypothesis violated: {clause}")]
    HypothesisViolated { clause: String },

    #[error("not Re-separated")]
    NotReSeparated,

    #[error("discs overlap: {0}")]
    DiscsOverlap(String),

    #[error("degree exhausted: {0}")]
    DegreeExhausted(String),

    #[error("oracle cannot jump at {q}")]
    OracleCannotJump { q: String },

    #[error("no matching τ in S")]
    NoMatchingTau,

    #[error("gap not found")]
    GapNotFound,

    #[error("q ∈ S: the target pair must avoid S")]
    TargetInNiceSet,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            _ => 1,
        }
    }
}
