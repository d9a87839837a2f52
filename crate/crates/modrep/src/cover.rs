//! Projectivity tests and projective covers.
//!
//! # Method
//!
//! Projectivity over the group algebra is equivalent to projectivity
//! over a Sylow 2-subgroup (the index is odd, so the relative trace
//! splits the counit), and over the local algebra of a 2-group
//! projective means free. Freeness has an exact rank test: a module
//! `M` over `kP` satisfies `dim M <= |P| * dim(M / M J)` with equality
//! precisely when `M` is free, because the projective cover of the
//! head always surjects onto `M`. That turns `is_projective` into one
//! restriction and one echelonization — no Higman criterion, no
//! idempotent lifting.
//!
//! A certified cover needs no provenance: any projective module whose
//! head is the single simple `S` is `P(S)`, so
//! [`certify_projective_cover`] checks projectivity and the hom
//! dimensions against the full simples list, and accepts candidates
//! built by any route whatsoever.

use permgrp::{PermGroup, Subgroup};

use crate::decompose::decompose;
use crate::homs::{hom_space, is_isomorphic};
use crate::{GModule, ModrepError, Result};

/// Largest group order for which the cover is read off the regular
/// module.
const REGULAR_COVER_CAP: u64 = 1024;

/// Whether `m` is projective, by the free-over-Sylow rank test.
///
/// `sylow` must be a Sylow 2-subgroup of the module's group.
///
/// # Errors
///
/// [`ModrepError::BadInput`] if `sylow` is not a full odd-index
/// 2-subgroup of the right group, plus enumeration failures.
pub fn is_projective(m: &GModule, sylow: &Subgroup) -> Result<bool> {
    if !crate::module::same_group(m.group(), sylow.parent()) {
        return Err(ModrepError::GroupMismatch(
            "sylow subgroup belongs to a different group value",
        ));
    }
    let p_order = sylow.order();
    let g_order = m.group().order();
    if !p_order.is_power_of_two() || g_order % p_order != 0 || (g_order / p_order) % 2 == 0 {
        return Err(ModrepError::BadInput {
            op: "is_projective",
            detail: format!("order {p_order} is not a full Sylow 2-subgroup of order {g_order}"),
        });
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    if m.dim() as u64 % p_order != 0 {
        return Ok(false);
    }
    let restricted = m.restrict(sylow)?;
    let head_dim = restricted.dim() - radical_rank_over_p_group(&restricted)?;
    Ok(m.dim() as u64 == p_order * head_dim as u64)
}

/// `dim(M J)` for a module over a 2-group: the joint row space of
/// `rho(x) - 1` over all group elements.
fn radical_rank_over_p_group(m: &GModule) -> Result<usize> {
    let n = m.dim();
    let identity = ffla::FqMatrix::identity(m.field(), n)?;
    let mut ech = ffla::Echelonizer::new(m.field(), n);
    let elements = m.group().enumerate()?.to_vec();
    for x in &elements {
        if x.is_identity() {
            continue;
        }
        // Characteristic two: rho(x) - 1 = rho(x) + 1.
        let shifted = m.rep_of_element(x)?.add(&identity)?;
        for i in 0..n {
            ech.insert(&shifted.row(i))?;
        }
        if ech.rank() == n {
            break;
        }
    }
    Ok(ech.rank())
}

/// Verify that `candidate` is the projective cover of `s`.
///
/// `simples` must list every composition factor of the candidate (in
/// practice: all simples of the relevant block or group), pairwise
/// non-isomorphic, with `s` isomorphic to exactly one entry. The
/// certificate is independent of how the candidate was constructed:
/// projectivity plus a head equal to `s` alone characterise `P(s)`.
///
/// # Errors
///
/// [`ModrepError::Validation`] describing the first failed check.
pub fn certify_projective_cover(
    candidate: &GModule,
    s: &GModule,
    simples: &[GModule],
    seed: u64,
) -> Result<()> {
    let group = candidate.group();
    let sylow = PermGroup::sylow2(group)?;
    if !is_projective(candidate, &sylow)? {
        return Err(ModrepError::Validation(format!(
            "candidate of dimension {} is not projective",
            candidate.dim()
        )));
    }
    let mut target = None;
    for (i, simple) in simples.iter().enumerate() {
        if is_isomorphic(simple, s, seed)? {
            if target.is_some() {
                return Err(ModrepError::Validation(
                    "simples list contains the target twice".into(),
                ));
            }
            target = Some(i);
        }
    }
    let Some(target) = target else {
        return Err(ModrepError::Validation(
            "target simple does not appear in the simples list".into(),
        ));
    };
    for (i, simple) in simples.iter().enumerate() {
        let found = hom_space(candidate, simple, seed)?.len();
        let expected = usize::from(i == target);
        if found != expected {
            return Err(ModrepError::Validation(format!(
                "head mismatch: dim Hom(candidate, simple {i} of dim {}) = {found}, expected {expected}",
                simple.dim()
            )));
        }
    }
    Ok(())
}

/// The projective cover `P(s)` of a simple module.
///
/// Routes, in order: a projective simple is its own cover; for groups
/// of order at most 1024 the cover is extracted from the regular
/// module; otherwise the restriction of `s` to a Sylow 2-subgroup is
/// induced back up and searched, which is kept honest — the summand
/// must pass the projectivity and head tests — but is not guaranteed
/// to succeed.
///
/// # Errors
///
/// [`ModrepError::CapExceeded`] when no route applies or the induced
/// route finds nothing certifiable, [`ModrepError::NotUnique`] when
/// the induced route finds several candidates.
pub fn projective_cover_of_simple(s: &GModule, seed: u64) -> Result<GModule> {
    let group = s.group().clone();
    let sylow = PermGroup::sylow2(&group)?;
    if is_projective(s, &sylow)? {
        return Ok(s.clone());
    }
    if group.order() <= REGULAR_COVER_CAP {
        let regular = GModule::regular_module(&group, s.field())?;
        for summand in decompose(&regular, seed)? {
            // Indecomposable projectives have simple heads, so one
            // nonzero hom pins the head to s.
            if !hom_space(&summand.module, s, seed)?.is_empty() {
                return Ok(summand.module);
            }
        }
        return Err(ModrepError::Validation(
            "regular module decomposition missed the simple head".into(),
        ));
    }
    let induced = s.restrict(&sylow)?.induce(&sylow)?;
    let mut found: Vec<GModule> = Vec::new();
    for summand in decompose(&induced, seed)? {
        if is_projective(&summand.module, &sylow)?
            && hom_space(&summand.module, s, seed)?.len() == 1
        {
            if !found.is_empty() && is_isomorphic(&found[0], &summand.module, seed)? {
                continue;
            }
            found.push(summand.module);
        }
    }
    match found.len() {
        0 => Err(ModrepError::CapExceeded {
            op: "projective_cover_of_simple",
            detail: format!(
                "induced route certified no cover for a dim {} simple over a group of order {}",
                s.dim(),
                group.order()
            ),
        }),
        1 => Ok(found.pop().expect("length checked")),
        n => Err(ModrepError::NotUnique {
            op: "projective_cover_of_simple",
            detail: format!("induced route certified {n} non-isomorphic candidates"),
        }),
    }
}
