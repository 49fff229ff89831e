use thiserror::Error;

use crate::ordinal::Ordinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("invalid ordinal literal {input:?} at byte {pos}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
    #[error("non-canonical term list: {0}")]
    NonCanonical(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("pair ({alpha}, {beta}) is outside the domain below {bound}")]
    OutOfRange {
        alpha: Ordinal,
        beta: Ordinal,
        bound: Ordinal,
    },
    #[error("expected {lo} < {hi}")]
    NotBelow { lo: Ordinal, hi: Ordinal },
    #[error("invalid ladder: {0}")]
    Ladder(String),
    #[error("ladder search for {alpha} exceeded index limit")]
    LadderSearch { alpha: Ordinal },
    #[error("search space {needed} exceeds guard {guard}")]
    GuardExceeded { needed: u128, guard: u128 },
    #[error("sample set is not closed: missing {0}")]
    NotClosed(Ordinal),
    #[error("club meets the bounded set at {0}")]
    ClubMeetsSet(Ordinal),
    #[error("intersection table is not monotone at ({alpha}, {n}, {beta}, {m})")]
    NonMonotone {
        alpha: usize,
        n: u32,
        beta: usize,
        m: u32,
    },
    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
