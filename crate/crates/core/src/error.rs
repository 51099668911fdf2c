use thiserror::Error;

use crate::circuit::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("condition syntax error at byte {pos}: {msg}")]
    ConditionSyntax { pos: usize, msg: String },

    #[error("invalid circuit: {}", format_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("qubit {0} is not live")]
    DeadQubit(u32),

    #[error("arity mismatch for {gate}: expected {expected}, got {got}")]
    Arity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unsupported gate for this operation: {0}")]
    Unsupported(String),

    #[error("qubit budget exceeded: {needed} > {limit}")]
    Budget { needed: usize, limit: usize },

    #[error("variable budget exceeded: {needed} > {limit}")]
    VariableBudget { needed: usize, limit: usize },

    #[error("term out of range: {0}")]
    Range(String),

    #[error("deallocated qubit {qubit} is not in |0>")]
    DirtyDealloc { qubit: u32 },

    #[error("assertion at instruction {index} violated")]
    AssertionViolated { index: usize },

    #[error("benchmark parameters invalid: {0}")]
    Params(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
