use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring of size {would_be} exceeds the size cap of {cap} elements")]
    Capacity { would_be: u128, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ring mismatch: `{left}` vs `{right}`")]
    RingMismatch { left: String, right: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("homomorphism search would enumerate {candidates} candidates (limit {limit})")]
    SearchLimit { candidates: u128, limit: u128 },

    #[error("arity {arity} outside the supported range 2..={bound}")]
    ArityBound { arity: usize, bound: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("construction failed at step {step}: {reason}")]
    Construction { step: u8, reason: String },

    #[error("graph of map is not a right ideal: {0}")]
    InvalidGraph(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
