//! End-to-end block theory for the symmetric group on five points
//! over GF(2): idempotents, block membership, Cartan data, vertices,
//! Scott modules, and the Green correspondence, checked against
//! independently established values.

use std::sync::Arc;

use blocktheory::{
    block_idempotents, block_of, block_project, cartan_matrix, defect_order,
    elementary_divisors, green_correspondent, is_relatively_projective, maximal_subgroups,
    scott_module, vertex, BlockError, ClassData,
};
use ffla::FieldSpec;
use modrep::{chop, decompose, hom_space, is_isomorphic, GModule};
use permgrp::{CosetTable, Perm, PermGroup, Subgroup};

const SEED: u64 = 2026;

fn s5() -> Arc<PermGroup> {
    let gens = vec![
        Perm::from_cycles(5, &[vec![0, 1]]).unwrap(),
        Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap(),
    ];
    Arc::new(PermGroup::new(5, gens).unwrap())
}

/// The centralizer of the transposition (0 1): ⟨(0 1)⟩ × S₃ on the
/// last three points, of order 12 and index 10.
fn d12(g: &Arc<PermGroup>) -> Subgroup {
    Subgroup::new(
        Arc::clone(g),
        vec![
            Perm::from_cycles(5, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(5, &[vec![2, 3]]).unwrap(),
            Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap(),
        ],
    )
    .unwrap()
}

fn ten_point_module(g: &Arc<PermGroup>, field: FieldSpec) -> GModule {
    let table = Arc::new(CosetTable::build(g, &d12(g)).unwrap());
    assert_eq!(table.len(), 10);
    GModule::perm_module(g, &table, field).unwrap()
}

#[test]
fn s5_splits_into_two_blocks_with_the_known_class_data() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let classes = ClassData::compute(&g).unwrap();
    assert_eq!(classes.count(), 7);
    let mut sizes: Vec<u64> = (0..classes.count()).map(|i| classes.size(i)).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 10, 15, 20, 20, 24, 30]);
    assert_eq!(sizes.iter().filter(|&&s| s % 2 == 1).count(), 2);

    let blocks = block_idempotents(&g, field, SEED).unwrap();
    assert_eq!(blocks.len(), 2);
    assert!(blocks[0].is_principal());
    assert!(!blocks[1].is_principal());
    // The two idempotents sum to the identity of the center: the
    // class-sum coefficient vectors add to (1, 0, …, 0) with the
    // identity class first.
    let sum: Vec<u8> = blocks[0]
        .coeffs()
        .iter()
        .zip(blocks[1].coeffs())
        .map(|(&a, &b)| field.add(a, b))
        .collect();
    let mut one = vec![0u8; classes.count()];
    one[0] = 1;
    assert_eq!(sum, one);
}

#[test]
fn the_ten_point_module_splits_across_both_blocks() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let ten = ten_point_module(&g, field);
    let blocks = block_idempotents(&g, field, SEED).unwrap();

    let err = block_of(&ten, &blocks, SEED).unwrap_err();
    assert!(matches!(err, BlockError::NotBlockHomogeneous(_)));

    let principal_part = block_project(&ten, &blocks[0]).unwrap();
    assert_eq!(principal_part.dim(), 6);
    let chopped = chop(&principal_part, SEED).unwrap();
    let dims = chopped.multiset.dim_multiset();
    assert_eq!(dims.get(&1), Some(&2));
    assert_eq!(dims.get(&4), Some(&1));

    let other_part = block_project(&ten, &blocks[1]).unwrap();
    assert_eq!(other_part.dim(), 4);
    assert_eq!(chop(&other_part, SEED).unwrap().multiset.total(), 1);
    assert_eq!(block_of(&other_part, &blocks, SEED).unwrap(), 1);
    assert_eq!(block_of(&principal_part, &blocks, SEED).unwrap(), 0);
}

#[test]
fn the_regular_module_yields_the_cartan_matrices_and_defects() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let ten = ten_point_module(&g, field);
    let blocks = block_idempotents(&g, field, SEED).unwrap();

    // The three simple modules: k, the 4-dimensional principal-block
    // simple (a composition factor of the 10-point module), and the
    // 4-dimensional simple spanning the other block.
    let triv = GModule::trivial_module(&g, field).unwrap();
    let principal_part = block_project(&ten, &blocks[0]).unwrap();
    let four_b = chop(&principal_part, SEED)
        .unwrap()
        .simples
        .into_iter()
        .map(|(_, m)| m)
        .find(|m| m.dim() == 4)
        .unwrap();
    let four_a = block_project(&ten, &blocks[1]).unwrap();

    let regular = GModule::regular_module(&g, field).unwrap();
    let parts = decompose(&regular, SEED).unwrap();
    let mut shape: Vec<(usize, usize)> = parts
        .iter()
        .map(|p| (p.dim(), p.multiplicity()))
        .collect();
    shape.sort_unstable();
    assert_eq!(shape, vec![(8, 4), (16, 4), (24, 1)]);

    let cover_of = |s: &GModule| -> GModule {
        parts
            .iter()
            .map(|p| &p.module)
            .find(|pim| !hom_space(pim, s, SEED).unwrap().is_empty())
            .expect("every simple has a projective cover in the regular module")
            .clone()
    };
    let p_k = cover_of(&triv);
    let p_4b = cover_of(&four_b);
    let p_4a = cover_of(&four_a);
    assert_eq!((p_k.dim(), p_4b.dim(), p_4a.dim()), (24, 16, 8));

    let principal_cartan = cartan_matrix(
        &[triv.clone(), four_b.clone()],
        &[p_k.clone(), p_4b.clone()],
        SEED,
    )
    .unwrap();
    assert_eq!(principal_cartan, vec![vec![8, 4], vec![4, 3]]);
    assert_eq!(elementary_divisors(&principal_cartan), vec![1, 8]);
    assert_eq!(defect_order(&principal_cartan), 8);

    let other_cartan = cartan_matrix(
        std::slice::from_ref(&four_a),
        std::slice::from_ref(&p_4a),
        SEED,
    )
    .unwrap();
    assert_eq!(other_cartan, vec![vec![2]]);
    assert_eq!(defect_order(&other_cartan), 2);
}

#[test]
fn the_non_principal_simple_has_a_transposition_vertex_with_trivial_source() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let ten = ten_point_module(&g, field);
    let blocks = block_idempotents(&g, field, SEED).unwrap();
    let four_a = block_project(&ten, &blocks[1]).unwrap();

    let sylow = PermGroup::sylow2(&g).unwrap();
    assert_eq!(sylow.order(), 8);
    let report = vertex(&four_a, &sylow, SEED).unwrap();
    assert_eq!(report.vertex.order(), 2);
    let transposition = Subgroup::new(
        Arc::clone(&g),
        vec![Perm::from_cycles(5, &[vec![0, 1]]).unwrap()],
    )
    .unwrap();
    assert!(PermGroup::are_conjugate_subgroups(&g, &report.vertex, &transposition).unwrap());
    assert!(report.is_trivial_source);

    // Every module is projective relative to a full Sylow subgroup;
    // a non-projective one is not projective relative to the trivial
    // subgroup.
    assert!(is_relatively_projective(&four_a, &sylow, SEED).unwrap());
    let trivial_sub = Subgroup::trivial(Arc::clone(&g));
    assert!(!is_relatively_projective(&four_a, &trivial_sub, SEED).unwrap());
}

#[test]
fn the_scott_module_over_the_transposition_centralizer_is_uniserial() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let sub = d12(&g);
    let sc = scott_module(&g, &sub, field, SEED).unwrap();
    assert_eq!(sc.dim(), 6);
    assert!(is_isomorphic(&sc, &sc.dual(), SEED).unwrap());
    let dims = chop(&sc, SEED).unwrap().multiset.dim_multiset();
    assert_eq!(dims.get(&1), Some(&2));
    assert_eq!(dims.get(&4), Some(&1));

    // The Scott module is a summand of the defining permutation
    // module, exactly once.
    let ten = ten_point_module(&g, field);
    let parts = decompose(&ten, SEED).unwrap();
    let hits: Vec<usize> = parts
        .iter()
        .filter(|p| p.dim() == sc.dim() && is_isomorphic(&p.module, &sc, SEED).unwrap())
        .map(|p| p.multiplicity())
        .collect();
    assert_eq!(hits, vec![1]);
}

#[test]
fn the_green_correspondence_round_trips_the_non_principal_simple() {
    let g = s5();
    let field = FieldSpec::new(2).unwrap();
    let ten = ten_point_module(&g, field);
    let blocks = block_idempotents(&g, field, SEED).unwrap();
    let four_a = block_project(&ten, &blocks[1]).unwrap();

    let p = Subgroup::new(
        Arc::clone(&g),
        vec![Perm::from_cycles(5, &[vec![0, 1]]).unwrap()],
    )
    .unwrap();
    let h = d12(&g);
    let f = green_correspondent(&four_a, &h, &p, SEED).unwrap();
    assert_eq!(f.group().order(), 12);
    let f_parts = decompose(&f, SEED).unwrap();
    assert_eq!(f_parts.len(), 1);
    assert_eq!(f_parts[0].multiplicity(), 1);

    // Inducing the correspondent back recovers the original module
    // as a summand exactly once.
    let induced = f.induce(&h).unwrap();
    assert_eq!(induced.dim(), f.dim() * 10);
    let parts = decompose(&induced, SEED).unwrap();
    let hits: Vec<usize> = parts
        .iter()
        .filter(|part| {
            part.dim() == four_a.dim() && is_isomorphic(&part.module, &four_a, SEED).unwrap()
        })
        .map(|part| part.multiplicity())
        .collect();
    assert_eq!(hits, vec![1]);
}

#[test]
fn maximal_subgroup_counts_follow_the_frattini_quotient() {
    // An elementary abelian group of rank 4 has 15 maximal subgroups;
    // the dihedral group of order 8 has 3.
    let gens = vec![
        Perm::from_cycles(8, &[vec![0, 1]]).unwrap(),
        Perm::from_cycles(8, &[vec![2, 3]]).unwrap(),
        Perm::from_cycles(8, &[vec![4, 5]]).unwrap(),
        Perm::from_cycles(8, &[vec![6, 7]]).unwrap(),
    ];
    let ea = Arc::new(PermGroup::new(8, gens).unwrap());
    let whole = Subgroup::new(Arc::clone(&ea), ea.generators().to_vec()).unwrap();
    let maxes = maximal_subgroups(&whole).unwrap();
    assert_eq!(maxes.len(), 15);
    for m in &maxes {
        assert_eq!(m.order(), 8);
    }
}
