use thiserror::Error;

/// Crate-wide error type. Variant names follow the failure modes of the
/// individual operations; see the module documentation for which operations
/// raise which variants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window has length {got}, expected {expected}")]
    WindowLength { expected: usize, got: usize },

    #[error("window entries at positions {i} and {j} are congruent mod n")]
    DuplicateResidue { i: usize, j: usize },

    #[error("sum of displacements is not a multiple of n")]
    NonIntegralBallNumber,

    #[error("permutation is not plus (f(i) >= i fails)")]
    NotPlus,

    #[error("permutation is not strictly plus (f(i) > i fails)")]
    NotStrictPlus,

    #[error("permutations have mismatched parameters: {0}")]
    MismatchedParameters(String),

    #[error("parameter out of range: {0}")]
    InvalidParameters(String),

    #[error("enumeration limit exceeded: n = {n} > cap {cap}")]
    LimitExceeded { n: usize, cap: usize },

    #[error("empty window: j = {j} < i = {i}")]
    EmptyWindow { i: i64, j: i64 },

    #[error("invalid binary periodic matrix: {0}")]
    InvalidColumns(String),

    #[error("cyclic rank matrix violates {axiom} at (i, j) = ({i}, {j})")]
    AxiomViolation { axiom: &'static str, i: i64, j: i64 },

    #[error("no rank pivot for row {i}: malformed cyclic rank matrix")]
    NoPivot { i: i64 },

    #[error("matrix has row rank below k")]
    RankDeficient,

    #[error("invalid bundle summand: {0}")]
    InvalidSummand(String),

    #[error("summands live on cycles of different lengths")]
    MismatchedN,

    #[error("Massey pairing precondition failed: {pairing} is nonzero")]
    OrthogonalityViolation { pairing: &'static str },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
