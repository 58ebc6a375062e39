use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed algebra specification: {0}")]
    BadSpec(String),
    #[error("unsupported ring map: {0}")]
    UnsupportedMap(String),
    #[error("matrix is not invertible over {0}")]
    NotInvertible(String),
    #[error("form is not invariant: identity {identity} fails on basis triple ({i}, {j}, {k})")]
    NotInvariant {
        i: usize,
        j: usize,
        k: usize,
        identity: &'static str,
    },
    #[error("algebra has no verified identity element")]
    NotUnital,
    #[error("algebra is not a verified Lie algebra")]
    NotLie,
    #[error("bad complement: {0}")]
    BadComplement(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("2 is not a unit in the base ring")]
    TwoNotUnit,
    #[error("fixed points have rank {rank}, expected a free module of rank {expected}")]
    FixedPointsNotFree { rank: usize, expected: usize },
    #[error("descended value at basis pair ({i}, {j}) does not lie in the base ring")]
    ValueNotInR { i: usize, j: usize },
    #[error("missing root of unity: {0}")]
    MissingRootOfUnity(String),
    #[error("automorphism is not diagonalizable: eigenspaces span {found} of {expected} dimensions")]
    NotDiagonalizable { found: usize, expected: usize },
    #[error("algebra is not central simple")]
    NotCentralSimple,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
