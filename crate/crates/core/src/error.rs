use thiserror::Error;

use crate::certificate::CertificateReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which side of a table (or bisection) a prefix-code violation was found on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Domain,
    Range,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Domain => f.write_str("domain"),
            Side::Range => f.write_str("range"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("letter {letter} out of range 1..={max} ({what})")]
    InvalidLetter { letter: u8, max: u8, what: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("alphabets do not match: {0} vs {1}")]
    MismatchedAlphabet(String, String),
    #[error("overlapping {side} words: {first} and {second}")]
    Overlapping { side: Side, first: String, second: String },
    #[error("incomplete {side}: cylinders {missing} are not covered")]
    Incomplete { side: Side, missing: String },
    #[error("domain and range lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("empty pair list")]
    EmptyTable,
    #[error("expected an element of V_{{{d},{d}}}, got alphabet {got}")]
    ArityMismatch { d: u8, got: String },
    #[error("cannot transport {from} onto {to}: exactly one of them is the whole space")]
    Untransportable { from: String, to: String },
    #[error("bisection is not full: {0}")]
    NotFull(String),
    #[error("points are not tail equivalent")]
    NotRelated,
    #[error("boxes overlap: {first} and {second}")]
    OverlappingBoxes { first: String, second: String },
    #[error("boxes do not cover the product space (covered volume {covered})")]
    IncompleteBoxes { covered: String },
    #[error("set is not closed under inverses: {0}")]
    NotSymmetric(String),
    #[error("ping-pong sets {first} and {second} intersect")]
    DisjointnessViolation { first: &'static str, second: &'static str },
    #[error("ping-pong inclusion fails: {0}")]
    InclusionViolation(&'static str),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("parameters too weak: lhs does not exceed the norm bound")]
    InconclusiveParameters(Box<CertificateReport>),
    #[error("{0}")]
    Invalid(String),
}
