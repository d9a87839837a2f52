//! Finite permutation groups for modular representation work.
//!
//! The crate provides permutations on `0..n` ([`Perm`]), groups given by
//! generators with verified stabilizer chains ([`PermGroup`]), subgroups
//! with generator words ([`Subgroup`]), words over a generator list
//! ([`Word`]), conjugacy classes of small groups ([`ConjugacyClasses`])
//! and right coset tables ([`CosetTable`]).
//!
//! # Representation
//!
//! Permutations act on the right: `x^(pq) = (x^p)^q`, and products read
//! left to right. Orders and membership are exact — the stabilizer chain
//! is verified by checking that every Schreier generator sifts to the
//! identity. Exhaustive algorithms (enumeration, centralizers,
//! normalizers, Sylow subgroups, conjugacy classes, subgroup conjugacy)
//! refuse groups above [`ENUMERATION_CAP`].
//!
//! # Determinism
//!
//! Every operation is a pure function of its inputs: randomized chain
//! construction is seeded deterministically, and no result depends on
//! hash-map iteration order.

mod classes;
mod cosets;
mod error;
mod group;
mod perm;
mod subgroup;
mod word;

pub use classes::ConjugacyClasses;
pub use cosets::CosetTable;
pub use error::PermError;
pub use group::{PermGroup, ENUMERATION_CAP, WORD_LENGTH_BOUND};
pub use perm::Perm;
pub use subgroup::Subgroup;
pub use word::{GenTok, Word};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, PermError>;
