//! Relative projectivity, vertices, and trivial-source detection.
//!
//! # Method
//!
//! Higman's criterion decides relative projectivity: `m` is projective
//! relative to `V` exactly when the identity lies in the image of the
//! relative trace map on `End_{kV}(m↓V)`. The trace of each basis
//! endomorphism is computed in stages through a chain of subgroups
//! `V ≤ K₁ ≤ … ≤ G` (the trace map is transitive), which replaces one
//! huge transversal by a few small ones; the caller may supply
//! intermediate subgroups to enable this. Membership of the identity
//! in the span of the traces is one echelon insertion.
//!
//! Vertices follow by descent: starting from the Sylow 2-subgroup,
//! test the maximal subgroups of the current candidate and step into
//! the first one that passes Higman's criterion. A 2-group's maximal
//! subgroups are the index-2 preimages of the hyperplanes of its
//! Frattini quotient. When no maximal subgroup passes, the candidate
//! is minimal relatively-projective along this chain, and that forces
//! it to be a vertex: any strictly smaller vertex would lie inside
//! some maximal subgroup of the candidate up to conjugacy and would
//! have let the descent continue.
//!
//! # Determinism
//!
//! Maximal subgroups are enumerated in a canonical order (sorted coset
//! representatives, functionals in ascending bit order), so the
//! descent path and the reported vertex depend only on the inputs and
//! the seed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ffla::{Echelonizer, FqMatrix};
use modrep::{decompose, end_space, is_isomorphic, is_projective, GModule, Summand};
use permgrp::{CosetTable, Perm, PermGroup, Subgroup};

use crate::{BlockError, Result};

/// Work cap (field operations) for staged relative traces.
const TRACE_WORK_CAP: u64 = 50_000_000_000;
/// Largest 2-subgroup whose lattice is enumerated for vertex descent.
const LATTICE_CAP: u64 = 64;
/// Modules up to this dimension get an indecomposability check before
/// vertex descent; larger inputs trust the caller's certificate.
const INDECOMP_CHECK_CAP: usize = 160;

/// Vertex of an indecomposable module, with its trivial-source flag.
pub struct VertexReport {
    /// A minimal subgroup relative to which the module is projective;
    /// well defined up to conjugacy.
    pub vertex: Subgroup,
    /// Whether the module is a direct summand of the permutation
    /// module on the vertex's cosets.
    pub is_trivial_source: bool,
}

/// A precomputed decomposition of `k_V↑G` for reuse across several
/// vertex computations whose answers are conjugates of `V`.
pub struct TrivialSourceProbe {
    pub vertex: Subgroup,
    pub summands: Vec<Summand>,
}

/// Fresh `Subgroup` handle with the same parent and generators.
fn rewrap(s: &Subgroup) -> Subgroup {
    Subgroup::new(Arc::clone(s.parent()), s.generators().to_vec())
        .expect("re-wrapping a validated subgroup")
}

fn check_subgroup(m: &GModule, s: &Subgroup) -> Result<()> {
    if !modrep::same_group(m.group(), s.parent()) {
        return Err(BlockError::Validation(
            "subgroup and module live over different groups".into(),
        ));
    }
    Ok(())
}

/// Whether `m` is projective relative to `s` (single-stage trace).
///
/// # Errors
///
/// [`BlockError::CapExceeded`] when the transversal work would
/// overrun the cap; propagated failures.
pub fn is_relatively_projective(m: &GModule, s: &Subgroup, seed: u64) -> Result<bool> {
    is_relatively_projective_via(m, s, &[], seed)
}

/// Whether `m` is projective relative to `s`, staging the relative
/// trace through `intermediates` (subgroups strictly between `s` and
/// the group, any order; containment is validated).
///
/// # Errors
///
/// [`BlockError::Validation`] when the chain does not nest;
/// [`BlockError::CapExceeded`] when the work cap would be overrun.
pub fn is_relatively_projective_via(
    m: &GModule,
    s: &Subgroup,
    intermediates: &[Subgroup],
    seed: u64,
) -> Result<bool> {
    check_subgroup(m, s)?;
    let group = m.group();
    if s.order() == group.order() {
        return Ok(true);
    }
    if s.order() % 2 == 1 {
        // Relative projectivity to a 2′-subgroup is plain projectivity.
        let sylow = PermGroup::sylow2(group)?;
        return Ok(is_projective(m, &sylow)?);
    }
    let restricted = m.restrict(s)?;
    let thetas = end_space(&restricted, seed)?;
    trace_span_contains_identity(m, s, intermediates, &thetas)
}

/// Stage the relative traces of `thetas` from `s` up through the
/// chain and test whether the identity lies in their span.
fn trace_span_contains_identity(
    m: &GModule,
    s: &Subgroup,
    intermediates: &[Subgroup],
    thetas: &[FqMatrix],
) -> Result<bool> {
    let group = m.group();
    let n = m.dim();
    let field = m.field();
    // Chain: s, then the intermediates by ascending order, then G.
    let mut chain: Vec<&Subgroup> = vec![s];
    let mut mids: Vec<&Subgroup> = intermediates
        .iter()
        .filter(|t| t.order() > s.order() && t.order() < group.order())
        .collect();
    mids.sort_by_key(|t| t.order());
    chain.extend(mids);
    for t in &chain {
        check_subgroup(m, t)?;
    }
    let mut total_index = 0u64;
    for w in chain.windows(2) {
        for g in w[0].generators() {
            if !w[1].contains(g)? {
                return Err(BlockError::Validation(format!(
                    "trace chain does not nest: a subgroup of order {} is not contained in the next of order {}",
                    w[0].order(),
                    w[1].order()
                )));
            }
        }
        total_index += w[1].order() / w[0].order();
    }
    total_index += group.order() / chain.last().expect("nonempty chain").order();
    let work = total_index * (thetas.len() as u64) * (n as u64).pow(3);
    if work > TRACE_WORK_CAP {
        return Err(BlockError::CapExceeded {
            op: "relative trace",
            detail: format!(
                "staged transversals of total size {total_index} over {} endomorphisms of dimension {n} need about {work} operations",
                thetas.len()
            ),
        });
    }
    let mut current: Vec<FqMatrix> = thetas.to_vec();
    for t in 0..chain.len() {
        let outer: Arc<PermGroup> = if t + 1 < chain.len() {
            chain[t + 1].as_group_arc()
        } else {
            Arc::clone(group)
        };
        let inner = Subgroup::new(Arc::clone(&outer), chain[t].generators().to_vec())?;
        let table = CosetTable::build(&outer, &inner)?;
        let mut pairs = Vec::with_capacity(table.len());
        for i in 0..table.len() {
            let rep = table.rep(i);
            pairs.push((m.rep_of_element(rep)?, m.rep_of_element(&rep.inverse())?));
        }
        for theta in current.iter_mut() {
            let mut acc = FqMatrix::zero(field, n, n)?;
            for (rho, rho_inv) in &pairs {
                acc = acc.add(&rho_inv.multiply(theta)?.multiply(rho)?)?;
            }
            *theta = acc;
        }
    }
    let mut ech = Echelonizer::new(field, n * n);
    let mut flat = vec![0u8; n * n];
    for tr in &current {
        for i in 0..n {
            flat[i * n..(i + 1) * n].copy_from_slice(&tr.row(i));
        }
        ech.insert(&flat)?;
    }
    let identity = FqMatrix::identity(field, n)?;
    for i in 0..n {
        flat[i * n..(i + 1) * n].copy_from_slice(&identity.row(i));
    }
    // The identity is a relative trace iff it does not enlarge the span.
    Ok(!ech.insert(&flat)?)
}

/// Canonical coset representative: the minimum of `x·Φ`.
fn canon(x: &Perm, phi: &BTreeSet<Perm>) -> Perm {
    phi.iter()
        .map(|f| x.mul(f))
        .min()
        .expect("the Frattini subgroup is nonempty")
}

/// Closure of a subset of a (small) group under multiplication.
fn closure(degree: usize, seeds: &[Perm]) -> BTreeSet<Perm> {
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    set.insert(Perm::identity(degree));
    let mut frontier: Vec<Perm> = seeds.to_vec();
    while let Some(x) = frontier.pop() {
        if set.contains(&x) {
            continue;
        }
        let members: Vec<Perm> = set.iter().cloned().collect();
        set.insert(x.clone());
        for y in members {
            frontier.push(x.mul(&y));
            frontier.push(y.mul(&x));
        }
    }
    set
}

/// The maximal subgroups of a 2-group: preimages of the hyperplanes
/// of the Frattini quotient, in a canonical order.
///
/// # Errors
///
/// [`BlockError::TooLarge`] above [`LATTICE_CAP`]; propagated
/// subgroup-construction failures.
pub fn maximal_subgroups(s: &Subgroup) -> Result<Vec<Subgroup>> {
    let order = s.order();
    assert!(order.is_power_of_two(), "maximal subgroup descent expects a 2-group");
    if order > LATTICE_CAP {
        return Err(BlockError::TooLarge {
            op: "subgroup lattice",
            detail: format!("order {order} exceeds the lattice cap {LATTICE_CAP}"),
        });
    }
    if order == 1 {
        return Ok(Vec::new());
    }
    let degree = s.parent().degree();
    let elements: Vec<Perm> = s.elements()?.to_vec();
    // Frattini subgroup: squares and commutators, closed under products.
    let mut phi_seeds = Vec::new();
    for x in &elements {
        phi_seeds.push(x.mul(x));
    }
    for x in &elements {
        for y in &elements {
            phi_seeds.push(x.inverse().mul(&y.inverse()).mul(x).mul(y));
        }
    }
    let phi = closure(degree, &phi_seeds);
    // Elementary abelian quotient: canonical representatives, then
    // greedy F₂ coordinates over the sorted representatives.
    let mut coset_of: BTreeMap<Perm, Perm> = BTreeMap::new();
    let mut reps: BTreeSet<Perm> = BTreeSet::new();
    for x in &elements {
        let r = canon(x, &phi);
        coset_of.insert(x.clone(), r.clone());
        reps.insert(r);
    }
    let identity_rep = canon(&Perm::identity(degree), &phi);
    let mut coords: BTreeMap<Perm, u32> = BTreeMap::new();
    coords.insert(identity_rep, 0);
    let mut basis: Vec<Perm> = Vec::new();
    for rep in &reps {
        if coords.contains_key(rep) {
            continue;
        }
        let bit = 1u32 << basis.len();
        let known: Vec<(Perm, u32)> = coords.iter().map(|(p, &c)| (p.clone(), c)).collect();
        for (p, c) in known {
            coords.insert(canon(&p.mul(rep), &phi), c | bit);
        }
        basis.push(rep.clone());
    }
    let d = basis.len();
    assert_eq!(1usize << d, reps.len(), "the Frattini quotient is elementary abelian");
    assert!(d >= 1, "a nontrivial 2-group has a proper Frattini quotient");
    let phi_gens: Vec<Perm> = phi.iter().filter(|p| !p.is_identity()).cloned().collect();
    let mut out = Vec::with_capacity((1usize << d) - 1);
    for alpha in 1u32..(1 << d) {
        // Generators: preimages of a basis of ker(alpha), plus Φ.
        let mut gens: Vec<Perm> = Vec::new();
        let mut span: Vec<u32> = Vec::new();
        for mask in 1u32..(1 << d) {
            if (mask & alpha).count_ones() % 2 != 0 {
                continue;
            }
            let mut reduced = mask;
            for &b in &span {
                reduced = reduced.min(reduced ^ b);
            }
            if reduced == 0 {
                continue;
            }
            span.push(reduced);
            let mut g = Perm::identity(degree);
            for (i, b) in basis.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    g = g.mul(b);
                }
            }
            gens.push(g);
        }
        gens.extend(phi_gens.iter().cloned());
        let sub = Subgroup::new(Arc::clone(s.parent()), gens)?;
        assert_eq!(sub.order() * 2, order, "hyperplane preimages have index 2");
        out.push(sub);
    }
    Ok(out)
}

/// Vertex of an indecomposable module by descent from the Sylow
/// 2-subgroup, with its trivial-source flag.
///
/// # Errors
///
/// [`BlockError::NotIndecomposable`] when the input splits (checked
/// up to dimension 160); propagated failures.
pub fn vertex(m: &GModule, sylow: &Subgroup, seed: u64) -> Result<VertexReport> {
    vertex_via(m, sylow, &[], None, seed)
}

/// Vertex with staged traces through `intermediates` and an optional
/// reusable probe for the trivial-source test.
///
/// # Errors
///
/// As [`vertex`], plus cap errors from the staged traces.
pub fn vertex_via(
    m: &GModule,
    sylow: &Subgroup,
    intermediates: &[Subgroup],
    probe: Option<&TrivialSourceProbe>,
    seed: u64,
) -> Result<VertexReport> {
    check_subgroup(m, sylow)?;
    assert!(sylow.order().is_power_of_two(), "vertex descent starts at a 2-group");
    if m.dim() <= INDECOMP_CHECK_CAP {
        let parts = decompose(m, seed)?;
        if parts.len() != 1 || parts[0].multiplicity() != 1 {
            return Err(BlockError::NotIndecomposable(format!(
                "vertex input splits into {} summand classes",
                parts.iter().map(Summand::multiplicity).sum::<usize>()
            )));
        }
    }
    // Descent path, innermost last; the Higman chain for a candidate
    // is the path so far plus the caller's intermediates.
    let mut path: Vec<Subgroup> = Vec::new();
    let mut current = rewrap(sylow);
    loop {
        if current.order() == 1 {
            break;
        }
        let maximals = maximal_subgroups(&current)?;
        let mut descended = false;
        for cand in maximals {
            let thetas = end_space(&m.restrict(&cand)?, seed)?;
            let mut chain: Vec<Subgroup> = path.iter().map(rewrap).collect();
            chain.push(rewrap(&current));
            chain.extend(intermediates.iter().map(rewrap));
            if trace_span_contains_identity(m, &cand, &chain, &thetas)? {
                path.push(current);
                current = cand;
                descended = true;
                break;
            }
        }
        if !descended {
            break;
        }
    }
    let is_trivial_source = trivial_source_flag(m, &current, probe, seed)?;
    Ok(VertexReport {
        vertex: current,
        is_trivial_source,
    })
}

/// Whether `m` is a summand of the permutation module on the cosets
/// of `v`, reusing the probe when its vertex is conjugate to `v`.
fn trivial_source_flag(
    m: &GModule,
    v: &Subgroup,
    probe: Option<&TrivialSourceProbe>,
    seed: u64,
) -> Result<bool> {
    let group = m.group();
    if let Some(p) = probe {
        if PermGroup::are_conjugate_subgroups(group, v, &p.vertex)? {
            for s in &p.summands {
                if s.dim() == m.dim() && is_isomorphic(&s.module, m, seed)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
    }
    let table = Arc::new(CosetTable::build(group, v)?);
    let induced = GModule::perm_module(group, &table, m.field())?;
    let summands = decompose(&induced, seed)?;
    for s in &summands {
        if s.dim() == m.dim() && is_isomorphic(&s.module, m, seed)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffla::FieldSpec;

    fn d8() -> Arc<PermGroup> {
        // Dihedral of order 8 on the square.
        let gens = vec![
            Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap(),
            Perm::from_cycles(4, &[vec![1, 3]]).unwrap(),
        ];
        Arc::new(PermGroup::new(4, gens).unwrap())
    }

    #[test]
    fn d8_has_three_maximal_subgroups() {
        let g = d8();
        let s = Subgroup::new(Arc::clone(&g), g.generators().to_vec()).unwrap();
        let maxes = maximal_subgroups(&s).unwrap();
        assert_eq!(maxes.len(), 3);
        for m in &maxes {
            assert_eq!(m.order(), 4);
        }
        // Two of them are Klein fours, one is the cyclic C₄.
        let cyclic = maxes
            .iter()
            .filter(|m| m.elements().unwrap().iter().any(|x| x.order() == 4))
            .count();
        assert_eq!(cyclic, 1);
    }

    #[test]
    fn the_trivial_module_has_the_whole_sylow_as_vertex() {
        let g = d8();
        let s = Subgroup::new(Arc::clone(&g), g.generators().to_vec()).unwrap();
        let field = FieldSpec::new(2).unwrap();
        let triv = GModule::trivial_module(&g, field).unwrap();
        let report = vertex(&triv, &s, 0).unwrap();
        assert_eq!(report.vertex.order(), 8);
        assert!(report.is_trivial_source);
    }

    #[test]
    fn free_and_trivial_modules_sit_at_opposite_ends_of_relative_projectivity() {
        let g = d8();
        let s = Subgroup::new(Arc::clone(&g), g.generators().to_vec()).unwrap();
        let field = FieldSpec::new(2).unwrap();
        let reg = GModule::regular_module(&g, field).unwrap();
        assert!(is_relatively_projective(&reg, &s, 0).unwrap());
        for max in maximal_subgroups(&s).unwrap() {
            assert!(is_relatively_projective(&reg, &max, 0).unwrap());
        }
        // The trivial module is projective relative to no proper subgroup.
        let triv = GModule::trivial_module(&g, field).unwrap();
        for max in maximal_subgroups(&s).unwrap() {
            assert!(!is_relatively_projective(&triv, &max, 0).unwrap());
        }
    }
}
