use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinates must be >= 1, got ({row},{col})")]
    ZeroCoordinate { row: usize, col: usize },

    #[error("not a projection pair: row total {rows} != column total {cols}")]
    NotAProjectionPair { rows: usize, cols: usize },

    #[error("projections are not uniquely determined")]
    NotUnique,

    #[error("F1 is not in canonical (triangular) form")]
    NotCanonical,

    #[error("no realization for the given projections")]
    NoRealization,

    #[error("F1 empty")]
    EmptyF1,

    #[error("sizes differ (|F1| = {f1}, |F2| = {f2}) - call equalize first")]
    SizeMismatch { f1: usize, f2: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("enumeration guard exceeded: {candidates} candidate sets > limit {limit}")]
    GuardExceeded { candidates: u128, limit: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
