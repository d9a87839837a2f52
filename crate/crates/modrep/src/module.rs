//! The [`GModule`] type and the functorial constructions.
//!
//! # Representation
//!
//! A module stores one action matrix and one inverse per group
//! generator. Vectors are rows; `v.act_gen(j)` is `v * A_j`. A module
//! built from a coset table (permutation module, or induction of the
//! trivial module) keeps a shared handle on the table: its matrices are
//! permutation matrices, its dual is itself entry-for-entry, and the
//! decomposition machinery can read off the exact orbital endomorphism
//! basis instead of solving for endomorphisms.
//!
//! Group identity is pointer identity of the `Arc<PermGroup>`: two
//! modules interoperate only when they were built over the same shared
//! group value. `Subgroup::as_group_arc` keeps restriction targets
//! stable.

use std::sync::Arc;

use ffla::{Echelonizer, FieldSpec, FqMatrix};
use permgrp::{CosetTable, GenTok, Perm, PermGroup, Subgroup, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::{check_dim_cap, ModrepError, Result};

/// Number of random identity-word relation checks run by construction
/// validation.
const RELATION_CHECKS: usize = 20;

/// Seed domain for construction-time validation streams.
const VALIDATE_SEED: u64 = 0x4d52_4550_5641;

/// A finite-dimensional right kG-module given by generator actions.
#[derive(Clone)]
pub struct GModule {
    group: Arc<PermGroup>,
    field: FieldSpec,
    dim: usize,
    gens: Vec<FqMatrix>,
    invs: Vec<FqMatrix>,
    origin: Option<Arc<CosetTable>>,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GModule")
            .field("q", &self.field.q())
            .field("dim", &self.dim)
            .field("ngens", &self.gens.len())
            .field("perm_origin", &self.origin.is_some())
            .finish()
    }
}

/// Whether two groups are interchangeable as module owners.
///
/// Action matrices are indexed by generator position, so two groups
/// with the same degree and the same generator sequence present the
/// identical module category even when held in distinct allocations.
#[must_use]
pub fn same_group(a: &Arc<PermGroup>, b: &Arc<PermGroup>) -> bool {
    Arc::ptr_eq(a, b) || (a.degree() == b.degree() && a.generators() == b.generators())
}

impl GModule {
    // ------------------------------------------------------------------
    // Constructors
    // ------------------------------------------------------------------

    /// The permutation module of `group` on the cosets of `table`, with
    /// basis indexed by cosets.
    ///
    /// Validates the table against the group by [`RELATION_CHECKS`]
    /// random identity-word checks at the permutation level.
    ///
    /// # Errors
    ///
    /// [`ModrepError::TooLarge`] past the dimension cap,
    /// [`ModrepError::Validation`] when a relation check fails.
    pub fn perm_module(
        group: &Arc<PermGroup>,
        table: &Arc<CosetTable>,
        field: FieldSpec,
    ) -> Result<Self> {
        let dim = table.len();
        check_dim_cap(dim)?;
        let ngens = group.generators().len();
        validate_table(group, table)?;
        let mut gens = Vec::with_capacity(ngens);
        let mut invs = Vec::with_capacity(ngens);
        for j in 0..ngens {
            let action = table.action(j);
            gens.push(perm_matrix(field, action)?);
            invs.push(perm_matrix_inverse(field, action)?);
        }
        Ok(Self {
            group: Arc::clone(group),
            field,
            dim,
            gens,
            invs,
            origin: Some(Arc::clone(table)),
        })
    }

    /// The regular module k`group`: the permutation module on the
    /// cosets of the trivial subgroup.
    ///
    /// # Errors
    ///
    /// As for [`GModule::perm_module`]; the dimension is the group
    /// order.
    pub fn regular_module(group: &Arc<PermGroup>, field: FieldSpec) -> Result<Self> {
        let trivial = Subgroup::trivial(Arc::clone(group));
        let table = Arc::new(CosetTable::build(group, &trivial)?);
        Self::perm_module(group, &table, field)
    }

    /// The one-dimensional trivial module.
    ///
    /// # Errors
    ///
    /// Propagates matrix construction errors (none in practice).
    pub fn trivial_module(group: &Arc<PermGroup>, field: FieldSpec) -> Result<Self> {
        let ngens = group.generators().len();
        let one = FqMatrix::identity(field, 1)?;
        Ok(Self {
            group: Arc::clone(group),
            field,
            dim: 1,
            gens: vec![one.clone(); ngens],
            invs: vec![one; ngens],
            origin: None,
        })
    }

    /// A module from explicit generator matrices, in the order of
    /// `group.generators()`.
    ///
    /// Inverts every matrix and runs the random relation checks (full
    /// matrix products up to dimension 512, vector probes above).
    ///
    /// # Errors
    ///
    /// [`ModrepError::BadGenerator`] for non-square, misfielded or
    /// singular matrices, [`ModrepError::Validation`] when a relation
    /// check fails, [`ModrepError::TooLarge`] past the cap.
    pub fn from_generator_matrices(
        group: &Arc<PermGroup>,
        field: FieldSpec,
        gens: Vec<FqMatrix>,
    ) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(ModrepError::BadGenerator {
                index: gens.len(),
                reason: format!(
                    "expected {} matrices, got {}",
                    group.generators().len(),
                    gens.len()
                ),
            });
        }
        let dim = gens.first().map_or(0, FqMatrix::nrows);
        check_dim_cap(dim)?;
        let mut invs = Vec::with_capacity(gens.len());
        for (index, m) in gens.iter().enumerate() {
            if !m.is_square() || m.nrows() != dim {
                return Err(ModrepError::BadGenerator {
                    index,
                    reason: format!("expected {dim} x {dim}, got {} x {}", m.nrows(), m.ncols()),
                });
            }
            if m.field().q() != field.q() {
                return Err(ModrepError::BadGenerator {
                    index,
                    reason: format!("expected GF({}), got GF({})", field.q(), m.field().q()),
                });
            }
            invs.push(m.invert().map_err(|e| ModrepError::BadGenerator {
                index,
                reason: e.to_string(),
            })?);
        }
        let module = Self {
            group: Arc::clone(group),
            field,
            dim,
            gens,
            invs,
            origin: None,
        };
        module.validate(RELATION_CHECKS, VALIDATE_SEED)?;
        Ok(module)
    }

    // ------------------------------------------------------------------
    // Accessors
    // ------------------------------------------------------------------

    #[must_use]
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    #[must_use]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    /// Action matrix of generator `j`.
    #[must_use]
    pub fn generator_action(&self, j: usize) -> &FqMatrix {
        &self.gens[j]
    }

    /// Action matrix of the inverse of generator `j`.
    #[must_use]
    pub fn inverse_action(&self, j: usize) -> &FqMatrix {
        &self.invs[j]
    }

    /// The coset table this module is the permutation module of, when
    /// it was built from one.
    #[must_use]
    pub fn origin_table(&self) -> Option<&Arc<CosetTable>> {
        self.origin.as_ref()
    }

    // ------------------------------------------------------------------
    // Acting on vectors and words
    // ------------------------------------------------------------------

    /// `v * A` for the action `A` of the given token.
    pub(crate) fn act_tok(&self, v: &[u8], tok: GenTok) -> Result<Vec<u8>> {
        let j = tok.idx as usize;
        let m = if tok.inv { &self.invs[j] } else { &self.gens[j] };
        Ok(m.apply_row(v)?)
    }

    /// `v * rho(w)` without materializing the word's matrix.
    ///
    /// # Errors
    ///
    /// Dimension mismatch via the underlying matrix ops.
    pub fn act_word(&self, v: &[u8], w: &Word) -> Result<Vec<u8>> {
        let mut cur = v.to_vec();
        for &tok in &w.0 {
            cur = self.act_tok(&cur, tok)?;
        }
        Ok(cur)
    }

    /// The matrix of the word `w` (product of generator actions).
    ///
    /// # Errors
    ///
    /// Matrix errors on malformed tokens.
    pub fn rep_of_word(&self, w: &Word) -> Result<FqMatrix> {
        let mut acc = FqMatrix::identity(self.field, self.dim)?;
        for &tok in &w.0 {
            let j = tok.idx as usize;
            let m = if tok.inv { &self.invs[j] } else { &self.gens[j] };
            acc = acc.multiply(m)?;
        }
        Ok(acc)
    }

    /// The matrix representing the group element `x`.
    ///
    /// # Errors
    ///
    /// `NotMember`/`WordTooLong` from the word factorization, plus
    /// matrix errors.
    pub fn rep_of_element(&self, x: &Perm) -> Result<FqMatrix> {
        let w = self.group.factor_word(x)?;
        self.rep_of_word(&w)
    }

    // ------------------------------------------------------------------
    // Functorial constructions
    // ------------------------------------------------------------------

    /// Restriction along a subgroup: the same space, acted on by the
    /// subgroup's generators (evaluated through their words in the
    /// parent's generators).
    ///
    /// # Errors
    ///
    /// [`ModrepError::GroupMismatch`] when the module does not live
    /// over the subgroup's parent.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        if !same_group(&self.group, sub.parent()) {
            return Err(ModrepError::GroupMismatch(
                "restrict: module group is not the subgroup's parent",
            ));
        }
        let words = sub.generator_words()?;
        let mut gens = Vec::with_capacity(words.len());
        let mut invs = Vec::with_capacity(words.len());
        for w in &words {
            gens.push(self.rep_of_word(w)?);
            invs.push(self.rep_of_word(&w.inverse())?);
        }
        Ok(Self {
            group: sub.as_group_arc(),
            field: self.field,
            dim: self.dim,
            gens,
            invs,
            origin: None,
        })
    }

    /// Induction to the parent of `sub`, as block matrices over the
    /// given coset table: basis `v_a ⊗ t_i` at index `i*dim + a`.
    ///
    /// Induction of the trivial module is recognized and returned as a
    /// permutation module carrying the table.
    ///
    /// # Errors
    ///
    /// [`ModrepError::GroupMismatch`] when the module does not live
    /// over `sub` itself, [`ModrepError::TooLarge`] past the cap.
    pub fn induce_with_table(&self, sub: &Subgroup, table: &Arc<CosetTable>) -> Result<Self> {
        if !same_group(&self.group, &sub.as_group_arc()) {
            return Err(ModrepError::GroupMismatch(
                "induce: module group is not the subgroup",
            ));
        }
        let parent = sub.parent();
        let n = table.len();
        let d = self.dim;
        let dim = n * d;
        check_dim_cap(dim)?;
        if d == 1 && self.gens.iter().all(FqMatrix::is_identity) {
            return Self::perm_module(parent, table, self.field);
        }
        let sub_group = sub.as_group();
        let ngens = parent.generators().len();
        let mut gens = Vec::with_capacity(ngens);
        let mut invs = Vec::with_capacity(ngens);
        for (j, g) in parent.generators().iter().enumerate() {
            let action = table.action(j);
            let mut fwd = FqMatrix::zero(self.field, dim, dim)?;
            let mut bwd = FqMatrix::zero(self.field, dim, dim)?;
            for (i, &image) in action.iter().enumerate() {
                let target = image as usize;
                // t_i * g lies in the coset of t_target, so u is in the
                // subgroup and acts on the inner factor.
                let u = table.rep(i).mul(g).mul(&table.rep(target).inverse());
                debug_assert!(sub_group.contains(&u).unwrap_or(false));
                let block = self.rep_of_element(&u)?;
                let block_inv = block.invert()?;
                for a in 0..d {
                    for b in 0..d {
                        let v = block.get(a, b);
                        if v != 0 {
                            fwd.set(i * d + a, target * d + b, v)?;
                        }
                        let vi = block_inv.get(a, b);
                        if vi != 0 {
                            bwd.set(target * d + a, i * d + b, vi)?;
                        }
                    }
                }
            }
            gens.push(fwd);
            invs.push(bwd);
        }
        Ok(Self {
            group: Arc::clone(parent),
            field: self.field,
            dim,
            gens,
            invs,
            origin: None,
        })
    }

    /// [`GModule::induce_with_table`] with a freshly built coset table.
    ///
    /// # Errors
    ///
    /// As for `induce_with_table`, plus coset-table construction.
    pub fn induce(&self, sub: &Subgroup) -> Result<Self> {
        let table = Arc::new(CosetTable::build(sub.parent(), sub)?);
        self.induce_with_table(sub, &table)
    }

    /// Inner tensor product over the same group (Kronecker per
    /// generator, diagonal action).
    ///
    /// # Errors
    ///
    /// Group/field mismatch, dimension cap.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(ModrepError::GroupMismatch(
                "tensor: operands live over different groups",
            ));
        }
        if self.field.q() != other.field.q() {
            return Err(ModrepError::FieldMismatch(self.field.q(), other.field.q()));
        }
        check_dim_cap(self.dim * other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len());
        let mut invs = Vec::with_capacity(self.invs.len());
        for j in 0..self.gens.len() {
            gens.push(self.gens[j].kronecker(&other.gens[j])?);
            invs.push(self.invs[j].kronecker(&other.invs[j])?);
        }
        Ok(Self {
            group: Arc::clone(&self.group),
            field: self.field,
            dim: self.dim * other.dim,
            gens,
            invs,
            origin: None,
        })
    }

    /// Outer tensor product over a direct product group whose
    /// generator list is the left factor's generators (acting on the
    /// first `d1` points) followed by the right factor's (acting on the
    /// remaining points). The correspondence is verified exactly.
    ///
    /// # Errors
    ///
    /// [`ModrepError::GroupMismatch`] when `product` is not such a
    /// product arrangement, field mismatch, dimension cap.
    pub fn outer_tensor(product: &Arc<PermGroup>, left: &Self, right: &Self) -> Result<Self> {
        if left.field.q() != right.field.q() {
            return Err(ModrepError::FieldMismatch(left.field.q(), right.field.q()));
        }
        let d1 = left.group.degree();
        let d2 = right.group.degree();
        let nl = left.group.generators().len();
        let nr = right.group.generators().len();
        let ok = product.degree() == d1 + d2 && product.generators().len() == nl + nr;
        if !ok {
            return Err(ModrepError::GroupMismatch(
                "outer_tensor: product group shape does not match the factors",
            ));
        }
        for (j, g) in product.generators().iter().enumerate() {
            let images = g.images();
            let matches = if j < nl {
                let lg = left.group.generators()[j].images();
                (0..d1).all(|x| images[x] == lg[x])
                    && (d1..d1 + d2).all(|x| images[x] as usize == x)
            } else {
                let rg = right.group.generators()[j - nl].images();
                (0..d1).all(|x| images[x] as usize == x)
                    && (0..d2).all(|x| images[d1 + x] as usize == rg[x] as usize + d1)
            };
            if !matches {
                return Err(ModrepError::GroupMismatch(
                    "outer_tensor: product generator does not embed a factor generator",
                ));
            }
        }
        let dim = left.dim * right.dim;
        check_dim_cap(dim)?;
        let idl = FqMatrix::identity(left.field, left.dim)?;
        let idr = FqMatrix::identity(right.field, right.dim)?;
        let mut gens = Vec::with_capacity(nl + nr);
        let mut invs = Vec::with_capacity(nl + nr);
        for j in 0..nl {
            gens.push(left.gens[j].kronecker(&idr)?);
            invs.push(left.invs[j].kronecker(&idr)?);
        }
        for j in 0..nr {
            gens.push(idl.kronecker(&right.gens[j])?);
            invs.push(idl.kronecker(&right.invs[j])?);
        }
        Ok(Self {
            group: Arc::clone(product),
            field: left.field,
            dim,
            gens,
            invs,
            origin: None,
        })
    }

    /// The dual (contragredient) module: `g` acts by the inverse
    /// transpose. Permutation modules are self-dual entry-for-entry, so
    /// the coset-table origin is kept.
    #[must_use]
    pub fn dual(&self) -> Self {
        let gens: Vec<FqMatrix> = self.invs.iter().map(FqMatrix::transpose).collect();
        let invs: Vec<FqMatrix> = self.gens.iter().map(FqMatrix::transpose).collect();
        Self {
            group: Arc::clone(&self.group),
            field: self.field,
            dim: self.dim,
            gens,
            invs,
            origin: self.origin.clone(),
        }
    }

    /// Direct sum over the same group.
    ///
    /// # Errors
    ///
    /// Group/field mismatch, dimension cap.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(ModrepError::GroupMismatch(
                "direct_sum: operands live over different groups",
            ));
        }
        if self.field.q() != other.field.q() {
            return Err(ModrepError::FieldMismatch(self.field.q(), other.field.q()));
        }
        check_dim_cap(self.dim + other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len());
        let mut invs = Vec::with_capacity(self.invs.len());
        for j in 0..self.gens.len() {
            gens.push(FqMatrix::block_diag(&[
                self.gens[j].clone(),
                other.gens[j].clone(),
            ])?);
            invs.push(FqMatrix::block_diag(&[
                self.invs[j].clone(),
                other.invs[j].clone(),
            ])?);
        }
        Ok(Self {
            group: Arc::clone(&self.group),
            field: self.field,
            dim: self.dim + other.dim,
            gens,
            invs,
            origin: None,
        })
    }

    // ------------------------------------------------------------------
    // Sub and quotient modules
    // ------------------------------------------------------------------

    /// The submodule spanned by the (independent, invariant) `basis`
    /// rows, with the action rewritten in basis coordinates.
    ///
    /// # Errors
    ///
    /// [`ModrepError::BadInput`] for dependent rows,
    /// [`ModrepError::Validation`] when the span is not invariant.
    pub fn submodule(&self, basis: &FqMatrix) -> Result<Self> {
        let r = basis.nrows();
        let mut ech = Echelonizer::with_tracking(self.field, self.dim);
        for i in 0..r {
            if !ech.insert(&basis.row(i))? {
                return Err(ModrepError::BadInput {
                    op: "submodule",
                    detail: format!("basis row {i} depends on earlier rows"),
                });
            }
        }
        let express = |m: &FqMatrix, ech: &Echelonizer| -> Result<FqMatrix> {
            let mut out = FqMatrix::zero(self.field, r, r)?;
            for i in 0..r {
                let image = m.apply_row(&basis.row(i))?;
                let coeffs = ech.express(&image)?.ok_or_else(|| {
                    ModrepError::Validation(format!(
                        "submodule: basis is not invariant (row {i} escapes the span)"
                    ))
                })?;
                out.set_row(i, &coeffs)?;
            }
            Ok(out)
        };
        let mut gens = Vec::with_capacity(self.gens.len());
        let mut invs = Vec::with_capacity(self.invs.len());
        for j in 0..self.gens.len() {
            gens.push(express(&self.gens[j], &ech)?);
            invs.push(express(&self.invs[j], &ech)?);
        }
        Ok(Self {
            group: Arc::clone(&self.group),
            field: self.field,
            dim: r,
            gens,
            invs,
            origin: None,
        })
    }

    /// The quotient by the submodule spanned by `basis`, together with
    /// the complement rows whose images form the quotient basis
    /// (needed to lift quotient data back into the ambient
    /// coordinates).
    ///
    /// # Errors
    ///
    /// As for [`GModule::submodule`].
    pub fn quotient(&self, basis: &FqMatrix) -> Result<(Self, FqMatrix)> {
        let r = basis.nrows();
        let mut ech = Echelonizer::with_tracking(self.field, self.dim);
        for i in 0..r {
            if !ech.insert(&basis.row(i))? {
                return Err(ModrepError::BadInput {
                    op: "quotient",
                    detail: format!("basis row {i} depends on earlier rows"),
                });
            }
        }
        // Extend by standard vectors to a full basis; the tail indices
        // r.. of an express() answer are then quotient coordinates.
        let mut complement = Vec::new();
        let mut e = vec![0u8; self.dim];
        for i in 0..self.dim {
            if ech.rank() == self.dim {
                break;
            }
            e[i] = 1;
            if ech.insert(&e)? {
                complement.push(i);
            }
            e[i] = 0;
        }
        let s = complement.len();
        let mut comp_rows = FqMatrix::zero(self.field, s, self.dim)?;
        for (t, &i) in complement.iter().enumerate() {
            comp_rows.set(t, i, 1)?;
        }
        let express = |m: &FqMatrix| -> Result<FqMatrix> {
            let mut out = FqMatrix::zero(self.field, s, s)?;
            for t in 0..s {
                let image = m.apply_row(&comp_rows.row(t))?;
                let coeffs = ech
                    .express(&image)?
                    .expect("the echelon spans the whole space");
                out.set_row(t, &coeffs[r..])?;
            }
            Ok(out)
        };
        // Invariance of the sub-basis: every basis image must stay in
        // the span of the basis alone (zero complement coordinates).
        for j in 0..self.gens.len() {
            for i in 0..r {
                let image = self.gens[j].apply_row(&basis.row(i))?;
                let coeffs = ech
                    .express(&image)?
                    .expect("the echelon spans the whole space");
                if coeffs[r..].iter().any(|&c| c != 0) {
                    return Err(ModrepError::Validation(format!(
                        "quotient: basis is not invariant (row {i} escapes under generator {j})"
                    )));
                }
            }
        }
        let mut gens = Vec::with_capacity(self.gens.len());
        let mut invs = Vec::with_capacity(self.invs.len());
        for j in 0..self.gens.len() {
            gens.push(express(&self.gens[j])?);
            invs.push(express(&self.invs[j])?);
        }
        let module = Self {
            group: Arc::clone(&self.group),
            field: self.field,
            dim: s,
            gens,
            invs,
            origin: None,
        };
        Ok((module, comp_rows))
    }

    // ------------------------------------------------------------------
    // Validation
    // ------------------------------------------------------------------

    /// Runs `relations` random identity-word checks: a random word is
    /// evaluated in the group, factored back through the stabilizer
    /// chain, and the concatenated word (an identity relation) must act
    /// trivially. Full matrix products are used up to dimension 512,
    /// vector probes above.
    ///
    /// # Errors
    ///
    /// [`ModrepError::Validation`] on the first failing check.
    pub fn validate(&self, relations: usize, seed: u64) -> Result<()> {
        let ngens = self.gens.len();
        if ngens == 0 || self.dim == 0 {
            return Ok(());
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ (self.dim as u64) << 16 ^ ngens as u64);
        for check in 0..relations {
            let len = rng.gen_range(4..=12);
            let toks: Vec<GenTok> = (0..len)
                .map(|_| {
                    let idx = rng.gen_range(0..ngens) as u32;
                    if rng.gen_bool(0.5) {
                        GenTok::inv(idx)
                    } else {
                        GenTok::gen(idx)
                    }
                })
                .collect();
            let w = Word(toks);
            let p = self.group.evaluate_word(&w)?;
            let back = self.group.factor_word(&p)?;
            let relation = w.concat(&back.inverse());
            debug_assert!(self.group.evaluate_word(&relation)?.is_identity());
            let ok = if self.dim <= 512 {
                self.rep_of_word(&relation)?.is_identity()
            } else {
                let mut fine = true;
                for _ in 0..4 {
                    let v: Vec<u8> = (0..self.dim)
                        .map(|_| rng.gen_range(0..self.field.q()) as u8)
                        .collect();
                    if self.act_word(&v, &relation)? != v {
                        fine = false;
                        break;
                    }
                }
                fine
            };
            if !ok {
                return Err(ModrepError::Validation(format!(
                    "relation check {check} failed: word {w} does not act as the identity"
                )));
            }
        }
        Ok(())
    }
}

/// Permutation matrix of an action array: row `i` has a one in column
/// `action[i]`.
fn perm_matrix(field: FieldSpec, action: &[u32]) -> Result<FqMatrix> {
    let n = action.len();
    let mut m = FqMatrix::zero(field, n, n)?;
    for (i, &t) in action.iter().enumerate() {
        m.set(i, t as usize, 1)?;
    }
    Ok(m)
}

/// Inverse permutation matrix of an action array.
fn perm_matrix_inverse(field: FieldSpec, action: &[u32]) -> Result<FqMatrix> {
    let n = action.len();
    let mut m = FqMatrix::zero(field, n, n)?;
    for (i, &t) in action.iter().enumerate() {
        m.set(t as usize, i, 1)?;
    }
    Ok(m)
}

/// Coset-table validation: random identity words must induce the
/// identity permutation of cosets (checked at the permutation level,
/// no matrices).
fn validate_table(group: &Arc<PermGroup>, table: &Arc<CosetTable>) -> Result<()> {
    let ngens = group.generators().len();
    if ngens == 0 {
        return Ok(());
    }
    let mut rng = ChaCha12Rng::seed_from_u64(VALIDATE_SEED ^ table.len() as u64);
    let apply_word = |w: &Word| -> Result<Vec<usize>> {
        let mut images: Vec<usize> = (0..table.len()).collect();
        for &tok in &w.0 {
            let action = table.action(tok.idx as usize);
            if tok.inv {
                let mut inv = vec![0usize; action.len()];
                for (i, &t) in action.iter().enumerate() {
                    inv[t as usize] = i;
                }
                for im in &mut images {
                    *im = inv[*im];
                }
            } else {
                for im in &mut images {
                    *im = action[*im] as usize;
                }
            }
        }
        Ok(images)
    };
    for check in 0..RELATION_CHECKS {
        let len = rng.gen_range(4..=12);
        let toks: Vec<GenTok> = (0..len)
            .map(|_| {
                let idx = rng.gen_range(0..ngens) as u32;
                if rng.gen_bool(0.5) {
                    GenTok::inv(idx)
                } else {
                    GenTok::gen(idx)
                }
            })
            .collect();
        let w = Word(toks);
        let p = group.evaluate_word(&w)?;
        let back = group.factor_word(&p)?;
        let relation = w.concat(&back.inverse());
        let images = apply_word(&relation)?;
        if images.iter().enumerate().any(|(i, &im)| i != im) {
            return Err(ModrepError::Validation(format!(
                "coset table relation check {check} failed for word {w}"
            )));
        }
    }
    Ok(())
}
