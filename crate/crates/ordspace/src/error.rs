//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("the zero polynomial is not a valid input")]
    ZeroPolynomial,

    #[error("polynomial `{0}` is not square-free")]
    NotSquareFree(String),

    #[error("polynomial `{0}` has fewer than {1} real roots")]
    NotEnoughRoots(String, usize),

    #[error("excluded polynomial `{0}` vanishes at the isolated root")]
    SharedRoot(String),

    #[error("window ({lo}, {hi}) contains a root of `{poly}`; refine the window and retry")]
    WindowTooCoarse { lo: String, hi: String, poly: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("group element does not fit the space (rank {rank}): {what}")]
    CoordinateMismatch { rank: usize, what: String },

    #[error("group rank {rank} exceeds the enumeration cap {cap} (set ORDSPACE_MAX_GROUP_RANK to raise it)")]
    RankCapExceeded { rank: usize, cap: usize },

    #[error("enumeration cap exceeded: {needed} > {cap} {what}")]
    EnumerationCapExceeded { needed: u128, cap: u128, what: String },

    #[error("size cap exceeded: {what}")]
    SizeCapExceeded { what: String },

    #[error("empty seed")]
    EmptySeed,

    #[error("empty input list")]
    EmptyInput,

    #[error("the distinguished element -1 is not in the span of the given subgroup")]
    MinusOneNotInSpan,

    #[error("no input polynomial has a real root; the quotient construction needs at least one")]
    NoRealRoots,

    #[error("group extension rank must be at least 1")]
    ExtensionRankZero,

    #[error("fan rank must be at least 1")]
    FanRankZero,

    #[error("no point of the quotient matches the given ordering")]
    NoMatchingPoint,

    #[error("structure cannot be decomposed: {0}")]
    Undecomposable(String),

    #[error("tower monotonicity violated: formula became false at a finer level")]
    MonotonicityViolation,

    #[error("internal error: {0}")]
    Internal(String),
}
