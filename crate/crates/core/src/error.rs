use thiserror::Error;

/// Errors raised by the group backends and the verification layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("infinite index: {0}")]
    InfiniteIndex(String),
    #[error("incompatible ranks: {0}")]
    IncompatibleRanks(String),
    #[error("stage budget exceeded: no certificate within {0} stages")]
    StageBudgetExceeded(usize),
    #[error("not computable: {0}")]
    NotComputable(String),
    #[error("precision escalation failed at N = {0}")]
    PrecisionEscalationFailure(u32),
    #[error("bound exceeded: order {order} > {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("subgroup is not invariant under the endomorphism")]
    HypothesisNotInvariant,
    #[error("undecidable input: {0}")]
    UndecidableInput(String),
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("no projection rule for {0}")]
    NoProjectionRule(String),
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
