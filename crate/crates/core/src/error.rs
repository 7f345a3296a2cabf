use thiserror::Error;

use crate::groupoid::AxiomReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    RaggedRow { row: usize, len: usize, order: usize },
    #[error("entry {value} out of range for a group of order {order}")]
    OutOfRange { value: usize, order: usize },
    #[error("table is not a Latin square (row {row:?}, column {col:?} is not a permutation)")]
    NotLatin { row: Option<usize>, col: Option<usize> },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("table is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("not a permutation: {0:?}")]
    BadPermutation(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupoidError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("duplicate outcome label {0:?}")]
    DuplicateOutcome(String),
    #[error("outcome index {index} out of range ({count} outcomes)")]
    OutcomeOutOfRange { index: usize, count: usize },
    #[error("label {label} is not an element of a group of order {order}")]
    LabelOutOfRange { label: usize, order: usize },
    #[error("duplicate transition ({to}, label {label:?}, {from})")]
    DuplicateTransition { to: usize, label: Option<usize>, from: usize },
    #[error("compose table must be {expected}x{expected}")]
    TableShape { expected: usize },
    #[error("groupoid axioms violated: {0}")]
    Axioms(AxiomReport),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Errors raised by the algebraic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not self-adjoint (defect {defect:e})")]
    NotSelfAdjoint { defect: f64 },
    #[error("function is not positive definite: fiber over outcome {outcome} has eigenvalue {eigenvalue:e}")]
    NotPositiveDefinite { outcome: usize, eigenvalue: f64 },
    #[error("normalization sum over units is not a positive real ({0})")]
    BadNormalization(num_complex::Complex64),
    #[error("state is not factorizable")]
    NotFactorizable,
    #[error("degenerate state: Gram matrix vanishes")]
    DegenerateState,
    #[error("generator count mismatch: quiver has {expected}, got {got} values")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator {0} is not a transition of the groupoid")]
    GeneratorNotFound(usize),
    #[error("inconsistent generator values: {0}")]
    Contradiction(Box<crate::states::ContradictionReport>),
    #[error("invalid time grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
