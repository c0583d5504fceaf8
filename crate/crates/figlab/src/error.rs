//! Error type shared across the crate. Every failure carries enough context
//! to print a useful diagnostic (degree, generator, witness indices) so the
//! CLI can report validation failures precisely.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FigError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("bad field: {0}")]
    BadField(String),

    #[error("bad group table: {0}")]
    BadGroup(String),

    #[error("representation of G_{degree} violates `{relation}`: {detail}")]
    BadRepresentation {
        degree: usize,
        relation: String,
        detail: String,
    },

    #[error("module data invalid at degree {degree}: {detail}")]
    BadModule { degree: usize, detail: String },

    #[error("dimension mismatch in {op}: {detail}")]
    DimMismatch { op: String, detail: String },

    #[error("window exhausted: computation needs degrees through {needed} but data is valid through {have}")]
    WindowExhausted { needed: usize, have: usize },

    #[error("dimension cap exceeded: degree {degree} has dimension {dim} > cap {cap} (set FIGLAB_MAX_DIM to raise)")]
    DimCap { degree: usize, dim: usize, cap: usize },

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("linear solve inconsistent: {0}")]
    SolveInconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FigError>;
