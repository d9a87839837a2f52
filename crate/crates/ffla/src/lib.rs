//! Dense linear algebra over the finite fields GF(2^k), 1 <= k <= 8.
//!
//! This crate is the performance kernel of the workspace: matrices over
//! GF(2) are bit-sliced into `u64` words, matrices over GF(4)..GF(256)
//! are byte-per-entry with log/antilog table arithmetic. Everything
//! above (permutation modules, the meataxe, block theory) reduces to
//! `multiply`, `rref`, `nullspace`, `solve` and `kronecker` from here.
//!
//! # Representation
//!
//! Field elements are polynomial bit patterns over GF(2) reduced modulo
//! a fixed Conway polynomial, so element `3` in GF(4) means `x + 1`.
//! The defining polynomials are constants in this crate; files written
//! by one build are therefore readable by any other.
//!
//! # Determinism
//!
//! All operations are deterministic, pure functions of their inputs.
//! Matrices are immutable after construction (all ops return new
//! values), so they are safe to share across threads.

mod echelon;
mod error;
mod field;
mod matrix;
pub mod poly;

pub use echelon::Echelonizer;
pub use error::FflaError;
pub use field::{FieldSpec, MAX_K};
pub use matrix::{entry_cap, set_entry_cap, FqMatrix, Rref};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FflaError>;
