//! Block theory for group algebras over small fields of
//! characteristic two: block idempotents, block membership and
//! projection, Cartan matrices and defect, relative projectivity,
//! vertices, Scott modules, and the Green correspondence.
//!
//! # Representation
//!
//! Blocks are recorded by the class-sum coefficients of their central
//! idempotents over a fixed conjugacy-class basis ([`Block`]); all
//! module-level work happens on [`modrep::GModule`] values and plain
//! [`ffla::FqMatrix`] data. Integer invariants (Cartan matrices,
//! decomposition tables, elementary divisors) use ordinary `u64`
//! matrices.
//!
//! # Method
//!
//! The center of the group algebra is split into blocks by factoring
//! minimal polynomials of random central elements and lifting the
//! resulting orthogonal idempotents; the number of blocks is known in
//! advance from the fixed space of the Frobenius map on the semisimple
//! quotient, so the search stops exactly when done. Block membership
//! of a module is decided by one probe vector pushed along a Cayley
//! walk of the group. Relative projectivity uses Higman's criterion
//! with staged relative traces; vertices descend through maximal
//! subgroups of 2-groups; Scott modules are extracted by directed
//! primary splitting; the Green correspondence restricts, decomposes,
//! and filters by vertex.
//!
//! # Determinism
//!
//! Every randomized routine is driven by a caller-supplied seed and a
//! counter-based generator, and canonical orderings (classes by
//! minimal representative, blocks principal-first, subgroups by
//! sorted generators) fix all outputs. A fixed seed yields identical
//! results across runs and platforms.

mod blocks;
mod cartan;
mod center;
mod classes;
mod error;
mod green;
mod relproj;
mod scott;

pub use blocks::{block_of, block_project, central_matrix};
pub use cartan::{
    cartan_matrix, defect_order, elementary_divisors, DecompositionTable,
};
pub use center::{block_idempotents, Block, CenterAlgebra};
pub use classes::{ClassData, CLASS_ENUM_CAP};
pub use error::BlockError;
pub use green::green_correspondent;
pub use relproj::{
    is_relatively_projective, is_relatively_projective_via, maximal_subgroups, vertex,
    vertex_via, TrivialSourceProbe, VertexReport,
};
pub use scott::scott_module;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, BlockError>;
