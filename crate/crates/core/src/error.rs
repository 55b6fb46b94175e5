use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("inadmissible relation: {0}")]
    InadmissibleRelation(String),
    #[error("base algebra is not a path algebra of an acyclic quiver")]
    NotHereditary,
    #[error("representation violates relation {0}")]
    RelationViolated(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("endomorphism ring is not split over the rationals")]
    NonSplitEndRing,
    #[error("randomised search exhausted its retries")]
    RetryExhausted,
    #[error("module is projective")]
    IsProjective,
    #[error("enumeration exceeded the cap of {0} indecomposables")]
    CapExceeded(usize),
    #[error("projective dimension bound {0} too small")]
    PdBoundTooSmall(usize),
    #[error("module is not in the right orthogonal category")]
    NotInPerp,
    #[error("module is not basic")]
    NonBasic,
    #[error("precondition failed: {0}")]
    PreconditionFail(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
