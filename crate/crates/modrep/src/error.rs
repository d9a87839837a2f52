use thiserror::Error;

/// Errors produced by module constructions and module-theoretic
/// operations.
#[derive(Debug, Error)]
pub enum ModrepError {
    /// An underlying linear-algebra operation failed.
    #[error(transparent)]
    Ffla(#[from] ffla::FflaError),

    /// An underlying permutation-group operation failed.
    #[error(transparent)]
    Perm(#[from] permgrp::PermError),

    /// Two modules that must live over the same group do not.
    #[error("group mismatch: {0}")]
    GroupMismatch(&'static str),

    /// Two modules that must live over the same field do not.
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u16, u16),

    /// A construction would exceed the module dimension cap.
    #[error("module too large: dimension {dim} exceeds the cap of {cap} (raise it with set_dim_cap)")]
    TooLarge { dim: usize, cap: usize },

    /// An iterative search exceeded its configured bound.
    #[error("cap exceeded in {op}: {detail}")]
    CapExceeded { op: &'static str, detail: String },

    /// A certified-irreducible factor has endomorphism ring larger than
    /// the ground field, so the field does not split the module.
    #[error("field GF({q}) too small: an irreducible factor of dimension {dim} has a {end_dim}-dimensional endomorphism ring")]
    FieldTooSmall { q: u16, dim: usize, end_dim: usize },

    /// A generator matrix is singular or malformed.
    #[error("bad generator matrix at index {index}: {reason}")]
    BadGenerator { index: usize, reason: String },

    /// A module invariant check failed; the module is inconsistent with
    /// its group.
    #[error("module validation failed: {0}")]
    Validation(String),

    /// An operation that must produce a unique answer found none or
    /// several; the certificate describes what was found instead.
    #[error("not unique in {op}: {detail}")]
    NotUnique { op: &'static str, detail: String },

    /// Input vector or basis data has the wrong shape.
    #[error("bad input to {op}: {detail}")]
    BadInput { op: &'static str, detail: String },
}
