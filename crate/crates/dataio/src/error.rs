use std::path::PathBuf;

use thiserror::Error;

/// Errors produced when reading, writing, or verifying on-disk data.
#[derive(Debug, Error)]
pub enum DataError {
    /// An operating-system level read or write failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An underlying linear-algebra operation failed.
    #[error(transparent)]
    Ffla(#[from] ffla::FflaError),

    /// An underlying permutation-group operation failed.
    #[error(transparent)]
    Perm(#[from] permgrp::PermError),

    /// An underlying module operation failed.
    #[error(transparent)]
    Modrep(#[from] modrep::ModrepError),

    /// An underlying block-theoretic operation failed.
    #[error(transparent)]
    Block(#[from] blocktheory::BlockError),

    /// A text file does not conform to its declared format.  Line and
    /// column numbers are 1-based; column 0 means the whole line.
    #[error("{path}:{line}:{col}: {detail}")]
    Parse {
        path: PathBuf,
        line: usize,
        col: usize,
        detail: String,
    },

    /// An image list does not describe a bijection.
    #[error("{path}: generator {index} is not a permutation: {detail}")]
    NotBijection {
        path: PathBuf,
        index: usize,
        detail: String,
    },

    /// A module file contains a singular generator matrix.
    #[error("{path}: generator {index} is not invertible")]
    NotInvertible { path: PathBuf, index: usize },

    /// A loaded object does not fit the object it must act with.
    #[error("degree mismatch in {what}: expected {expected}, found {found}")]
    DegreeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// A JSON fixture fails structural validation.
    #[error("{path}: {detail}")]
    Schema { path: PathBuf, detail: String },

    /// A decomposition table's degrees are inconsistent with its entries
    /// and simple dimensions.
    #[error("{path}: inconsistent decomposition table: {detail}")]
    DegreeInconsistent { path: PathBuf, detail: String },

    /// A manifest references a file that is not present.
    #[error("fixture file missing: {path}")]
    MissingFixture { path: PathBuf },

    /// A manifest entry has no pinned checksum yet, so the file cannot
    /// be trusted.
    #[error("fixture checksum not pinned: {path}")]
    UnpinnedChecksum { path: PathBuf },

    /// A file's checksum differs from the manifest.
    #[error("checksum mismatch for {path}: expected {expected}, found {actual}")]
    Checksum {
        path: PathBuf,
        expected: String,
        actual: String,
    },
}
