use thiserror::Error;

use crate::fixedpoint::SolveFailure;
use crate::point::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at position {index}")]
    NonFinite { index: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// An evaluator produced a value that is not a finite non-negative real.
    #[error("{what} evaluated to {value} at {points:?}")]
    Evaluation {
        what: &'static str,
        points: Vec<Point>,
        value: f64,
    },

    #[error("no candidate delta down to {smallest:e} keeps phi below {eps:e}")]
    ModulusNotFound { eps: f64, smallest: f64 },

    #[error("refinement left {} point(s) uncovered after {levels} levels: {uncovered:?}", uncovered.len())]
    NonTermination { levels: u32, uncovered: Vec<usize> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid nested family: {0}")]
    InvalidFamily(String),

    #[error("degenerate map: every sampled denominator was zero")]
    DegenerateMap,

    #[error("{0}")]
    Solve(Box<SolveFailure>),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
