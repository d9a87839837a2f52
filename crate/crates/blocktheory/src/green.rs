//! Green correspondence for indecomposable modules.
//!
//! # Method
//!
//! For a subgroup `h` containing the normalizer of a 2-subgroup `p`,
//! the Green correspondence matches each indecomposable `G`-module
//! with vertex `p` to the unique summand of its restriction to `h`
//! with vertex `p`. The implementation first certifies the vertex
//! precondition on the input with Higman's criterion (projective
//! relative to `p`, not relative to any maximal subgroup of `p`),
//! restricts, decomposes, and filters the summands by the same pair
//! of criteria inside `h`. The containment `N_G(p) ≤ h` guarantees
//! every other summand has a strictly smaller vertex, so exactly one
//! summand survives the filter, once.
//!
//! # Determinism
//!
//! The decomposition and all projectivity tests are seed-driven; the
//! returned module depends only on the inputs and the seed.

use std::sync::Arc;

use modrep::{decompose, GModule};
use permgrp::{PermGroup, Subgroup};

use crate::relproj::{is_relatively_projective, maximal_subgroups};
use crate::{BlockError, Result};

/// Whether `m` is projective relative to `p` but not relative to any
/// maximal subgroup of `p` — that is, whether `p` is a vertex of some
/// summand and, for indecomposable `m`, the vertex of `m`.
fn vertex_is_exactly(m: &GModule, p: &Subgroup, seed: u64) -> Result<bool> {
    if !is_relatively_projective(m, p, seed)? {
        return Ok(false);
    }
    for max in maximal_subgroups(p)? {
        if is_relatively_projective(m, &max, seed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Green correspondent of `x` in `h`: the unique summand of
/// `x↓h` with the same vertex `p`.
///
/// # Errors
///
/// [`BlockError::Validation`] when `p ≰ h`, or `h` does not contain
/// the normalizer of `p`; [`BlockError::VertexMismatch`] when `x`
/// fails the certificate that `p` is its vertex (for instance a
/// projective input, which is projective relative to every maximal
/// subgroup of `p`); [`BlockError::NotUnique`] when the summand
/// filter does not isolate exactly one class of multiplicity one.
pub fn green_correspondent(
    x: &GModule,
    h: &Subgroup,
    p: &Subgroup,
    seed: u64,
) -> Result<GModule> {
    let group = x.group();
    if !modrep::same_group(group, h.parent()) || !modrep::same_group(group, p.parent()) {
        return Err(BlockError::Validation(
            "the subgroups must live inside the module's group".into(),
        ));
    }
    for g in p.generators() {
        if !h.contains(g)? {
            return Err(BlockError::Validation(
                "the vertex subgroup must be contained in the target subgroup".into(),
            ));
        }
    }
    let normalizer = PermGroup::normalizer(group, p)?;
    for g in normalizer.generators() {
        if !h.contains(g)? {
            return Err(BlockError::Validation(format!(
                "the target subgroup of order {} does not contain the vertex normalizer of order {}",
                h.order(),
                normalizer.order()
            )));
        }
    }
    if !vertex_is_exactly(x, p, seed)? {
        return Err(BlockError::VertexMismatch(format!(
            "the input of dimension {} is not certified to have the given subgroup of order {} as vertex",
            x.dim(),
            p.order()
        )));
    }
    if h.order() == group.order() {
        return Ok(x.clone());
    }
    let restricted = x.restrict(h)?;
    let parts = decompose(&restricted, seed)?;
    let p_h = Subgroup::new(Arc::clone(restricted.group()), p.generators().to_vec())?;
    let mut hits: Vec<(usize, usize)> = Vec::new();
    for (idx, part) in parts.iter().enumerate() {
        if vertex_is_exactly(&part.module, &p_h, seed)? {
            hits.push((idx, part.multiplicity()));
        }
    }
    match hits.as_slice() {
        [(idx, 1)] => Ok(parts[*idx].module.clone()),
        [] => Err(BlockError::NotUnique {
            op: "green correspondence",
            detail: format!(
                "no summand of the restriction (dimension {}) keeps the vertex",
                restricted.dim()
            ),
        }),
        _ => Err(BlockError::NotUnique {
            op: "green correspondence",
            detail: format!(
                "{} summand classes keep the vertex, with multiplicities {:?}",
                hits.len(),
                hits.iter().map(|(_, m)| *m).collect::<Vec<_>>()
            ),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffla::FieldSpec;
    use permgrp::{Perm, PermGroup};

    fn s3() -> Arc<PermGroup> {
        let gens = vec![
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
        ];
        Arc::new(PermGroup::new(3, gens).unwrap())
    }

    #[test]
    fn the_correspondent_in_the_whole_group_is_the_module_itself() {
        let g = s3();
        let field = FieldSpec::new(2).unwrap();
        let triv = GModule::trivial_module(&g, field).unwrap();
        let whole = Subgroup::new(Arc::clone(&g), g.generators().to_vec()).unwrap();
        let sylow = PermGroup::sylow2(&g).unwrap();
        let f = green_correspondent(&triv, &whole, &sylow, 5).unwrap();
        assert_eq!(f.dim(), 1);
    }

    #[test]
    fn the_trivial_module_descends_to_the_trivial_module_of_the_normalizer() {
        // In S₃ the Sylow 2-subgroup is self-normalizing, so the
        // correspondent of k lives over C₂ and is k again.
        let g = s3();
        let field = FieldSpec::new(2).unwrap();
        let triv = GModule::trivial_module(&g, field).unwrap();
        let sylow = PermGroup::sylow2(&g).unwrap();
        let h = Subgroup::new(Arc::clone(&g), sylow.generators().to_vec()).unwrap();
        let f = green_correspondent(&triv, &h, &sylow, 5).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.group().order(), 2);
    }

    #[test]
    fn a_projective_input_is_rejected() {
        let g = s3();
        let field = FieldSpec::new(2).unwrap();
        let reg = GModule::regular_module(&g, field).unwrap();
        let whole = Subgroup::new(Arc::clone(&g), g.generators().to_vec()).unwrap();
        let sylow = PermGroup::sylow2(&g).unwrap();
        let err = green_correspondent(&reg, &whole, &sylow, 5).unwrap_err();
        assert!(matches!(err, BlockError::VertexMismatch(_)));
    }

    #[test]
    fn a_target_missing_the_normalizer_is_rejected() {
        let g = s3();
        let field = FieldSpec::new(2).unwrap();
        let triv = GModule::trivial_module(&g, field).unwrap();
        let c3 = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap()],
        )
        .unwrap();
        let sylow = PermGroup::sylow2(&g).unwrap();
        let err = green_correspondent(&triv, &c3, &sylow, 5).unwrap_err();
        assert!(matches!(err, BlockError::Validation(_)));
    }
}
