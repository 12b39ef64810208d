use alloc::string::String;
use thiserror::Error;

use crate::pregroup::TypeSeq;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: TypeSeq, found: TypeSeq },

    #[error("ill-typed diagram at layer {layer}: {reason}")]
    IllTyped { layer: usize, reason: String },

    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("derivation error: {0}")]
    Derivation(String),

    #[error("unsupported box in circuit compilation: {0}")]
    UnsupportedBox(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("postselection probability {0:e} below threshold")]
    ZeroNorm(f64),

    #[error("all {0} shots were discarded by postselection")]
    AllShotsDiscarded(usize),

    #[error("{count} sentence(s) failed to compile; first: {first}")]
    Compile { count: usize, first: String },
}

pub type Result<T> = core::result::Result<T, Error>;
