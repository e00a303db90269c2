use thiserror::Error;

use crate::algebra::VarSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("variable set mismatch: {left} vs {right}")]
    VarSetMismatch { left: VarSet, right: VarSet },

    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("branch-and-bound budget of {budget} boxes exhausted; certified upper bound {upper}")]
    BudgetExhausted { budget: usize, upper: f64 },

    #[error("audit failed: {0}")]
    AuditFailed(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
