//! Scott module extraction by directed splitting.
//!
//! # Method
//!
//! The Scott module `Sc(G, Q)` is the unique indecomposable summand
//! of the permutation module `k_Q↑G` whose head contains the trivial
//! module. By Frobenius reciprocity `Hom(k_Q↑G, k)` is one
//! dimensional, so at every stage of any direct decomposition exactly
//! one piece carries the full space of maps onto `k`. The extraction
//! therefore never decomposes the whole module: it repeatedly splits
//! the current piece with a certified primary splitting along a
//! commuting endomorphism and descends into the unique child with a
//! nonzero map onto `k`, discarding the rest.
//!
//! Endomorphisms come from the orbital basis at the root (the exact
//! endomorphism algebra of a permutation module), and afterwards from
//! condensations `e·θ·e` of earlier samples into the chosen child,
//! which stay inside the child's endomorphism algebra because the
//! projection `e` onto a direct summand is equivariant. Small pieces
//! switch to an exactly computed endomorphism basis, which is swept
//! in full before the piece is accepted as indecomposable.
//!
//! # Determinism
//!
//! All sampling is driven by a seeded generator; the descent path and
//! the returned basis depend only on the inputs and the seed.

use std::sync::Arc;

use ffla::{FieldSpec, FqMatrix};
use modrep::{end_space, orbital_end, primary_split, GModule, OrbitalEnd};
use permgrp::{CosetTable, PermGroup, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::{BlockError, Result};

/// Sampling attempts per piece before giving up on a split.
const SAMPLE_ROUNDS: usize = 40;
/// Condensed endomorphism samples carried into a chosen child.
const POOL_SIZE: usize = 16;
/// Pieces up to this dimension get an exact endomorphism basis.
const EXACT_DIM_CAP: usize = 160;
/// Random sweeps over an exact basis before accepting a leaf.
const EXACT_SAMPLES: usize = 48;

/// Where the current piece draws commuting endomorphisms from.
enum ThetaSource {
    /// Orbital basis of the root permutation module (exact, sampled
    /// by random coefficients without materializing the whole basis).
    Orbital(OrbitalEnd),
    /// Condensed samples from an ancestor (exact elements, but not
    /// necessarily spanning).
    Pool(Vec<FqMatrix>),
    /// An exactly computed basis of the endomorphism algebra.
    Exact(Vec<FqMatrix>),
}

/// Multiplicity of the trivial module in the head: the dimension of
/// the space of equivariant maps onto `k`, the common right kernel of
/// `A_j + I` over the generators.
fn trivial_head_dim(m: &GModule) -> Result<usize> {
    let n = m.dim();
    if m.generator_count() == 0 {
        return Ok(n);
    }
    let eye = FqMatrix::identity(m.field(), n)?;
    let mut stacked: Option<FqMatrix> = None;
    for j in 0..m.generator_count() {
        let d = m.generator_action(j).add(&eye)?;
        stacked = Some(match stacked {
            Some(s) => s.vstack(&d)?,
            None => d,
        });
    }
    Ok(stacked.expect("at least one generator").nullspace().nrows())
}

fn random_coeffs(field: FieldSpec, len: usize, rng: &mut ChaCha12Rng) -> Vec<u8> {
    let q = field.q();
    let mut coeffs: Vec<u8> = (0..len).map(|_| (rng.gen_range(0..q)) as u8).collect();
    if coeffs.iter().all(|&c| c == 0) {
        coeffs[0] = 1;
    }
    coeffs
}

/// Random linear combination of a pool of endomorphisms.
fn random_combo(field: FieldSpec, mats: &[FqMatrix], rng: &mut ChaCha12Rng) -> Result<FqMatrix> {
    let n = mats[0].nrows();
    let coeffs = random_coeffs(field, mats.len(), rng);
    let mut acc = FqMatrix::zero(field, n, n)?;
    for (m, &c) in mats.iter().zip(&coeffs) {
        if c != 0 {
            acc = acc.add(&m.scale(c)?)?;
        }
    }
    Ok(acc)
}

/// Draw one endomorphism of the current piece from the source.
fn sample_theta(
    source: &ThetaSource,
    field: FieldSpec,
    round: usize,
    rng: &mut ChaCha12Rng,
) -> Result<FqMatrix> {
    match source {
        ThetaSource::Orbital(orb) => {
            let coeffs = random_coeffs(field, orb.count(), rng);
            Ok(orb.materialize(field, &coeffs)?)
        }
        ThetaSource::Pool(mats) | ThetaSource::Exact(mats) => {
            // Every fourth draw multiplies two pool members to reach
            // beyond the linear span of the samples.
            if round % 4 == 3 && mats.len() >= 2 {
                let a = rng.gen_range(0..mats.len());
                let b = rng.gen_range(0..mats.len());
                Ok(mats[a].multiply(&mats[b])?)
            } else {
                random_combo(field, mats, rng)
            }
        }
    }
}

/// Condense `theta` into the chosen child: the matrix of `e·θ·e`
/// restricted to the child, via the child rows of the stacked-basis
/// inverse.
fn condense(child: &FqMatrix, theta: &FqMatrix, t_block: &FqMatrix) -> Result<FqMatrix> {
    Ok(child.multiply(theta)?.multiply(t_block)?)
}

/// The Scott module `Sc(G, Q)`: the unique summand of `k_Q↑G` with
/// the trivial module in its head.
///
/// # Errors
///
/// [`BlockError::Validation`] when `q` is not a subgroup of `g`;
/// [`BlockError::CapExceeded`] when the coset space is too large;
/// propagated failures.
///
/// # Panics
///
/// Panics if the one-dimensionality of `Hom(k_Q↑G, k)` is ever
/// violated along the descent, which would certify an internal error.
pub fn scott_module(
    group: &Arc<PermGroup>,
    q: &Subgroup,
    field: FieldSpec,
    seed: u64,
) -> Result<GModule> {
    if !modrep::same_group(group, q.parent()) {
        return Err(BlockError::Validation(
            "the Scott subgroup must live inside the given group".into(),
        ));
    }
    let table = Arc::new(CosetTable::build(group, q)?);
    if table.len() > modrep::dim_cap() {
        return Err(BlockError::CapExceeded {
            op: "scott module",
            detail: format!(
                "coset space of size {} exceeds the dimension cap {}",
                table.len(),
                modrep::dim_cap()
            ),
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5343_4f54);
    let mut current = GModule::perm_module(group, &table, field)?;
    assert_eq!(
        trivial_head_dim(&current)?,
        1,
        "a transitive permutation module maps onto the trivial module in exactly one way"
    );
    let mut source = ThetaSource::Orbital(orbital_end(&current)?);
    loop {
        let n = current.dim();
        // Small pieces: exact endomorphism basis, full deterministic
        // sweep plus random combinations; no split certifies a leaf.
        if n <= EXACT_DIM_CAP && !matches!(source, ThetaSource::Exact(_)) {
            source = ThetaSource::Exact(end_space(&current, seed)?);
        }
        let mut found: Option<Vec<FqMatrix>> = None;
        if let ThetaSource::Exact(basis) = &source {
            if basis.len() == 1 {
                // End = k: the piece is certainly indecomposable.
                break;
            }
            for theta in basis {
                if let Some(children) = primary_split(&current, theta, seed)? {
                    found = Some(children);
                    break;
                }
            }
        }
        if found.is_none() {
            let rounds = match &source {
                ThetaSource::Exact(_) => EXACT_SAMPLES,
                _ => SAMPLE_ROUNDS,
            };
            for round in 0..rounds {
                let theta = sample_theta(&source, field, round, &mut rng)?;
                if let Some(children) = primary_split(&current, &theta, seed)? {
                    found = Some(children);
                    break;
                }
            }
        }
        let Some(children) = found else {
            // Exhausted the source without split evidence: accept.
            break;
        };
        let (child_module, child_source) = descend(&current, &source, &children, &mut rng)?;
        current = child_module;
        source = child_source;
    }
    assert_eq!(
        trivial_head_dim(&current)?,
        1,
        "the extracted Scott module keeps the one map onto the trivial module"
    );
    Ok(current)
}

/// Pick the unique child with the trivial module in its head and
/// condense the endomorphism source into it.
fn descend(
    current: &GModule,
    source: &ThetaSource,
    children: &[FqMatrix],
    rng: &mut ChaCha12Rng,
) -> Result<(GModule, ThetaSource)> {
    let field = current.field();
    let n = current.dim();
    let mut chosen: Option<(usize, GModule)> = None;
    let mut head_total = 0;
    for (idx, basis) in children.iter().enumerate() {
        let child = current.submodule(basis)?;
        let h = trivial_head_dim(&child)?;
        head_total += h;
        if h > 0 && chosen.is_none() {
            chosen = Some((idx, child));
        }
    }
    assert_eq!(
        head_total, 1,
        "a split must route the single map onto the trivial module into one child"
    );
    let (idx, child_module) = chosen.expect("one child carries the trivial head");
    let child = &children[idx];
    let r = child.nrows();
    // Stack all child bases and invert once; the child's column block
    // of the inverse realizes the projection onto the chosen summand.
    let mut stacked = children[0].clone();
    for basis in &children[1..] {
        stacked = stacked.vstack(basis)?;
    }
    let sinv = stacked.invert()?;
    let offset: usize = children[..idx].iter().map(FqMatrix::nrows).sum();
    let t_block = FqMatrix::from_fn(field, n, r, |i, j| sinv.get(i, offset + j))?;
    let next = match source {
        ThetaSource::Orbital(orb) => {
            let mut pool = Vec::with_capacity(POOL_SIZE);
            for _ in 0..POOL_SIZE {
                let coeffs = random_coeffs(field, orb.count(), rng);
                let theta = orb.materialize(field, &coeffs)?;
                pool.push(condense(child, &theta, &t_block)?);
            }
            ThetaSource::Pool(pool)
        }
        ThetaSource::Pool(mats) => {
            let mut pool = Vec::with_capacity(mats.len());
            for theta in mats {
                pool.push(condense(child, theta, &t_block)?);
            }
            ThetaSource::Pool(pool)
        }
        ThetaSource::Exact(mats) => {
            // Condensing a spanning set yields a spanning set of the
            // child's endomorphism algebra.
            let mut basis = Vec::with_capacity(mats.len());
            for theta in mats {
                basis.push(condense(child, theta, &t_block)?);
            }
            ThetaSource::Exact(basis)
        }
    };
    Ok((child_module, next))
}
