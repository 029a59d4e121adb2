use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order {order}: must be at least {exponent}")]
    InvalidOrder { exponent: i64, order: i64 },

    #[error("coefficient of q^{exponent} requested beyond truncation order {order}")]
    OutOfOrder { exponent: i64, order: i64 },

    #[error("series is not invertible over the integers: {0}")]
    NonInvertible(String),

    #[error("theta function f(q^{ea}, q^{eb}) diverges: exponents must sum to at least 1")]
    Divergent { ea: i64, eb: i64 },

    #[error("side condition gcd({p}, {t}) = 1 violated")]
    SideCondition { p: u32, t: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("unknown series `{0}`")]
    UnknownSeries(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
