//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the symbolic and numeric routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid letter {0:?}; words use the alphabet {{0,1}}")]
    InvalidLetter(char),
    #[error("{0:?} is not a Lyndon word")]
    NotLyndon(String),
    #[error("a single letter has no standard factorization")]
    SingleLetter,
    #[error("expected {0} < {1}")]
    Unordered(String, String),
    #[error("leaf position {pos} out of range for a tree with {leaves} leaves")]
    LeafPosition { pos: usize, leaves: usize },
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("inexact decomposition: {0}")]
    Inexact(String),
    #[error("{0} is not Möbius in {1}")]
    NotMobius(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("quadrature estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
