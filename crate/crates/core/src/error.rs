use thiserror::Error;

use crate::grid::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// `NotInHull` and `Ambiguous` are domain outcomes rather than bugs: the first
/// means the input cannot be a window of a tree in the Kenyon hull, the second
/// means the window is too small to certify an answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex ({}, {}) is not in the pattern", .0.x, .0.y)]
    VertexNotInPattern(Vertex),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("code must contain at least one letter")]
    EmptyCode,

    #[error("letter {letter:?} is outside the alphabet 0..{base}")]
    InvalidLetter { letter: char, base: u8 },

    #[error("codes have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),

    #[error("basepoint has valence {0}, decoding needs valence 1 or 2")]
    BadBasepoint(u8),

    #[error("not a window of the Kenyon hull: {0}")]
    NotInHull(String),

    #[error("window too small to certify the answer: {0}")]
    Ambiguous(String),

    #[error("pattern does not occur in the Kenyon tree")]
    NotFound,

    #[error("no repetitivity radius fits inside a window of radius {0}")]
    NotFoundWithinWindow(u32),

    #[error("unknown motif {0:?}")]
    UnknownMotif(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pattern has {0} vertices, more than the render limit of {1}")]
    Oversize(usize, usize),

    #[error("unknown {kind} {name:?} (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}
