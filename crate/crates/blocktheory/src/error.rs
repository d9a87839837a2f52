use thiserror::Error;

/// Errors produced by block-theoretic computations.
#[derive(Debug, Error)]
pub enum BlockError {
    /// An underlying linear-algebra operation failed.
    #[error(transparent)]
    Ffla(#[from] ffla::FflaError),

    /// An underlying permutation-group operation failed.
    #[error(transparent)]
    Perm(#[from] permgrp::PermError),

    /// An underlying module operation failed.
    #[error(transparent)]
    Modrep(#[from] modrep::ModrepError),

    /// The group is too large for class enumeration or the module too
    /// large for the requested evaluation.
    #[error("too large for {op}: {detail}")]
    TooLarge { op: &'static str, detail: String },

    /// An iterative search exceeded its configured bound.
    #[error("cap exceeded in {op}: {detail}")]
    CapExceeded { op: &'static str, detail: String },

    /// A block idempotent acted neither as zero nor as the identity, so
    /// the module mixes blocks.
    #[error("module is not block-homogeneous: {0}")]
    NotBlockHomogeneous(String),

    /// A module required to be indecomposable split.
    #[error("module is not indecomposable: {0}")]
    NotIndecomposable(String),

    /// An input module does not have the vertex the operation requires.
    #[error("vertex mismatch: {0}")]
    VertexMismatch(String),

    /// An operation whose answer is unique by a theorem found none or
    /// several candidates, certifying a bug upstream.
    #[error("not unique in {op}: {detail}")]
    NotUnique { op: &'static str, detail: String },

    /// An input invariant check failed.
    #[error("validation failed: {0}")]
    Validation(String),
}
