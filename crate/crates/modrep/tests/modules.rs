//! Integration checks for module functionality on groups small enough
//! to verify against hand calculations: symmetric groups in
//! characteristic two, where the regular module decompositions, Loewy
//! layers and hom-space dimensions are classical.

use std::sync::Arc;

use ffla::FieldSpec;
use modrep::{
    certify_projective_cover, chop, decompose, end_space, fingerprint, hom_space, is_isomorphic,
    is_projective, orbital_end, projective_cover_of_simple, radical_series, socle, socle_series,
    GModule, ModrepError,
};
use permgrp::{CosetTable, Perm, PermGroup, Subgroup};

fn gf2() -> FieldSpec {
    FieldSpec::new(2).unwrap()
}

fn gf4() -> FieldSpec {
    FieldSpec::new(4).unwrap()
}

fn s3() -> Arc<PermGroup> {
    let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
    let b = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
    Arc::new(PermGroup::new(3, vec![a, b]).unwrap())
}

fn c3() -> Arc<PermGroup> {
    let b = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
    Arc::new(PermGroup::new(3, vec![b]).unwrap())
}

fn s5() -> Arc<PermGroup> {
    let a = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
    let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
    Arc::new(PermGroup::new(5, vec![a, b]).unwrap())
}

/// Natural permutation module of S3 on 3 points.
fn natural3(field: FieldSpec) -> GModule {
    let g = s3();
    let point = Subgroup::new(
        Arc::clone(&g),
        vec![Perm::from_cycles(3, &[vec![1, 2]]).unwrap()],
    )
    .unwrap();
    let table = Arc::new(CosetTable::build(&g, &point).unwrap());
    GModule::perm_module(&g, &table, field).unwrap()
}

/// The 2-dimensional simple of S3: sum-zero vectors of the natural
/// module.
fn simple2(field: FieldSpec) -> GModule {
    let perm = natural3(field);
    let basis =
        ffla::FqMatrix::from_rows(field, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
    perm.submodule(&basis).unwrap()
}

#[test]
fn natural_s3_module_splits_off_the_fixed_line() {
    let m = natural3(gf2());
    // (1,1,1) spans a trivial summand since 1+1+1 = 1 is not in the
    // sum-zero complement over GF(2).
    let summands = decompose(&m, 0).unwrap();
    let mut dims: Vec<usize> = summands.iter().map(modrep::Summand::dim).collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 2]);
    assert!(summands.iter().all(|s| s.multiplicity() == 1));
}

#[test]
fn chop_natural_s3_finds_both_factors() {
    let result = chop(&natural3(gf2()), 0).unwrap();
    let dims = result.multiset.dim_multiset();
    assert_eq!(dims.get(&1), Some(&1));
    assert_eq!(dims.get(&2), Some(&1));
    assert_eq!(result.series.factors.len(), 2);
    // The filtration ends at the whole module.
    assert_eq!(result.series.filtration.last().unwrap().nrows(), 3);
}

#[test]
fn regular_s3_over_gf4_has_the_known_block_shape() {
    // kS3 in characteristic two: one projective cover of the trivial
    // module of dimension 2, and the simple 2 with multiplicity 2.
    let reg = GModule::regular_module(&s3(), gf4()).unwrap();
    let summands = decompose(&reg, 0).unwrap();
    assert_eq!(summands.len(), 2);
    assert!(summands.iter().all(|s| s.dim() == 2));
    let mut mults: Vec<usize> = summands.iter().map(modrep::Summand::multiplicity).collect();
    mults.sort_unstable();
    assert_eq!(mults, vec![1, 2]);
    for s in &summands {
        let factors = chop(&s.module, 0).unwrap();
        if s.multiplicity() == 2 {
            // The projective simple.
            assert_eq!(factors.series.factors.len(), 1);
        } else {
            // P(k) is uniserial [k | k].
            assert_eq!(factors.multiset.dim_multiset().get(&1), Some(&2));
        }
    }
}

#[test]
fn chop_regular_s3_over_gf2() {
    let reg = GModule::regular_module(&s3(), gf2()).unwrap();
    let result = chop(&reg, 0).unwrap();
    let dims = result.multiset.dim_multiset();
    assert_eq!(dims.get(&1), Some(&2));
    assert_eq!(dims.get(&2), Some(&2));
}

#[test]
fn chop_reports_non_split_endomorphism_fields() {
    // The regular module of C3 over GF(2) has a 2-dimensional factor
    // whose endomorphism ring is GF(4).
    let reg = GModule::regular_module(&c3(), gf2()).unwrap();
    match chop(&reg, 0) {
        Err(ModrepError::FieldTooSmall { q, dim, end_dim }) => {
            assert_eq!(q, 2);
            assert_eq!(dim, 2);
            assert_eq!(end_dim, 2);
        }
        Err(other) => panic!("expected FieldTooSmall, got {other}"),
        Ok(_) => panic!("expected FieldTooSmall, got a full series"),
    }
    // Over GF(4) the same module chops cleanly into three lines.
    let reg4 = GModule::regular_module(&c3(), gf4()).unwrap();
    let result = chop(&reg4, 0).unwrap();
    assert_eq!(result.multiset.dim_multiset().get(&1), Some(&3));
    assert_eq!(result.multiset.distinct(), 3);
}

#[test]
fn frobenius_reciprocity_for_an_induced_module_of_s5() {
    let g = s5();
    // D12 = <(0 1)> x S3 on {2,3,4}, order 12, index 10.
    let d12 = Subgroup::new(
        Arc::clone(&g),
        vec![
            Perm::from_cycles(5, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap(),
            Perm::from_cycles(5, &[vec![2, 3]]).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(d12.order(), 12);
    let induced = GModule::trivial_module(&d12.as_group_arc(), gf2())
        .unwrap()
        .induce(&d12)
        .unwrap();
    assert_eq!(induced.dim(), 10);
    let factors = chop(&induced, 0).unwrap();
    assert_eq!(factors.multiset.dim_multiset().get(&1), Some(&2));
    assert_eq!(factors.multiset.dim_multiset().get(&4), Some(&2));
    // Hom_G(k_D^G, S) = Hom_D(k, S|D): compare both sides for each
    // distinct factor.
    for (_, simple) in &factors.simples {
        let lhs = hom_space(&induced, simple, 0).unwrap().len();
        let restricted = simple.restrict(&d12).unwrap();
        let trivial_d = GModule::trivial_module(&d12.as_group_arc(), gf2()).unwrap();
        let rhs = hom_space(&trivial_d, &restricted, 0).unwrap().len();
        assert_eq!(lhs, rhs, "reciprocity fails on a dim {} factor", simple.dim());
    }
}

#[test]
fn induced_trivial_module_keeps_its_permutation_origin() {
    let g = s3();
    let point = Subgroup::new(
        Arc::clone(&g),
        vec![Perm::from_cycles(3, &[vec![1, 2]]).unwrap()],
    )
    .unwrap();
    let induced = GModule::trivial_module(&point.as_group_arc(), gf2())
        .unwrap()
        .induce(&point)
        .unwrap();
    assert!(induced.origin_table().is_some());
    assert_eq!(orbital_end(&induced).unwrap().count(), 2);
}

#[test]
fn orbital_count_of_the_regular_module_is_the_group_order() {
    let reg = GModule::regular_module(&s3(), gf2()).unwrap();
    let orb = orbital_end(&reg).unwrap();
    assert_eq!(orb.count(), 6);
    // Each orbital commutes with the action.
    let mut coeffs = vec![0u8; 6];
    coeffs[3] = 1;
    let e = orb.materialize(gf2(), &coeffs).unwrap();
    for j in 0..reg.generator_count() {
        let a = reg.generator_action(j);
        assert_eq!(a.multiply(&e).unwrap(), e.multiply(a).unwrap());
    }
}

#[test]
fn hom_space_between_the_simple_and_itself_is_a_line() {
    let s = simple2(gf2());
    let end = end_space(&s, 0).unwrap();
    assert_eq!(end.len(), 1);
    assert!(end[0].is_identity() || end[0].rank() == 2);
}

#[test]
fn schur_pairing_detects_the_trivial_multiplicity_in_a_tensor_square() {
    // Hom(k, 2 (x) 2*) = End(2) = k.
    let s = simple2(gf2());
    let pairing = s.tensor(&s.dual()).unwrap();
    let trivial = GModule::trivial_module(&s3(), gf2()).unwrap();
    assert_eq!(hom_space(&trivial, &pairing, 0).unwrap().len(), 1);
    assert_eq!(hom_space(&pairing, &trivial, 0).unwrap().len(), 1);
}

#[test]
fn isomorphism_test_separates_and_identifies() {
    let a = simple2(gf2());
    // The same simple arrived at through the regular module.
    let reg = GModule::regular_module(&s3(), gf2()).unwrap();
    let from_regular = chop(&reg, 0)
        .unwrap()
        .simples
        .iter()
        .find(|(l, _)| l.dim == 2)
        .map(|(_, m)| m.clone())
        .unwrap();
    assert!(is_isomorphic(&a, &from_regular, 0).unwrap());
    let trivial = GModule::trivial_module(&s3(), gf2()).unwrap();
    assert!(!is_isomorphic(&a, &trivial, 0).unwrap());
    assert!(is_isomorphic(&a, &a.dual(), 0).unwrap());
}

#[test]
fn fingerprints_are_reproducible_and_separate_non_isomorphic_modules() {
    let a = simple2(gf2());
    assert_eq!(fingerprint(&a).unwrap(), fingerprint(&a).unwrap());
    let trivial = GModule::trivial_module(&s3(), gf2()).unwrap();
    assert_ne!(fingerprint(&a).unwrap(), fingerprint(&trivial).unwrap());
}

#[test]
fn projective_cover_of_the_trivial_s3_module_is_uniserial_of_length_two() {
    let trivial = GModule::trivial_module(&s3(), gf2()).unwrap();
    let cover = projective_cover_of_simple(&trivial, 0).unwrap();
    assert_eq!(cover.dim(), 2);
    let sylow = PermGroup::sylow2(&s3()).unwrap();
    assert!(is_projective(&cover, &sylow).unwrap());
    assert!(!is_projective(&trivial, &sylow).unwrap());
    let simples = vec![trivial.clone(), simple2(gf2())];
    certify_projective_cover(&cover, &trivial, &simples, 0).unwrap();
    // The regular module is projective but has a non-simple head, so
    // it is not a cover of anything simple.
    let reg = GModule::regular_module(&s3(), gf2()).unwrap();
    assert!(certify_projective_cover(&reg, &trivial, &simples, 0).is_err());
    let series = radical_series(&cover, &simples, 0).unwrap();
    assert_eq!(series.len(), 2);
    assert!(series.layers.iter().all(|l| l.total_dim() == 1));
    // Self-dual uniserial module: socle and radical series agree.
    let soc = socle_series(&cover, &simples, 0).unwrap();
    assert_eq!(soc.len(), 2);
}

#[test]
fn socle_of_the_natural_module_is_everything() {
    // k_Omega = k + 2 is semisimple over GF(2), so the socle is the
    // whole module and the series has one layer.
    let m = natural3(gf2());
    let simples = vec![
        GModule::trivial_module(&s3(), gf2()).unwrap(),
        simple2(gf2()),
    ];
    let soc = socle(&m, &simples, 0).unwrap();
    assert_eq!(soc.nrows(), 3);
    let series = socle_series(&m, &simples, 0).unwrap();
    assert_eq!(series.len(), 1);
    assert_eq!(series.layers[0].total_dim(), 3);
}

#[test]
fn outer_tensor_factors_multiply() {
    // C2 x S3 on 2 + 3 points; regular kC2 (x) natural 3-point module.
    let c2 = Arc::new(
        PermGroup::new(2, vec![Perm::from_cycles(2, &[vec![0, 1]]).unwrap()]).unwrap(),
    );
    let product = Arc::new(
        PermGroup::new(
            5,
            vec![
                Perm::from_cycles(5, &[vec![0, 1]]).unwrap(),
                Perm::from_cycles(5, &[vec![2, 3]]).unwrap(),
                Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap(),
            ],
        )
        .unwrap(),
    );
    let left = GModule::regular_module(&c2, gf2()).unwrap();
    let s3_on_tail = Arc::new(
        PermGroup::new(
            3,
            vec![
                Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
                Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap(),
    );
    let point = Subgroup::new(
        Arc::clone(&s3_on_tail),
        vec![Perm::from_cycles(3, &[vec![1, 2]]).unwrap()],
    )
    .unwrap();
    let table = Arc::new(CosetTable::build(&s3_on_tail, &point).unwrap());
    let right = GModule::perm_module(&s3_on_tail, &table, gf2()).unwrap();
    let m = GModule::outer_tensor(&product, &left, &right).unwrap();
    assert_eq!(m.dim(), 6);
    // Factors multiply: (k + k) (x) (k + 2) gives 1,1,1,1,2,2... over
    // the product the four lines stay lines and the two 2s stay simple.
    let result = chop(&m, 0).unwrap();
    let dims = result.multiset.dim_multiset();
    assert_eq!(dims.get(&1), Some(&2));
    assert_eq!(dims.get(&2), Some(&2));
}

#[test]
fn quotient_by_the_sum_zero_submodule_is_trivial() {
    let m = natural3(gf2());
    let basis =
        ffla::FqMatrix::from_rows(gf2(), &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
    let (quo, _) = m.quotient(&basis).unwrap();
    assert_eq!(quo.dim(), 1);
    let trivial = GModule::trivial_module(&s3(), gf2()).unwrap();
    assert!(is_isomorphic(&quo, &trivial, 0).unwrap());
}

#[test]
fn generator_matrices_must_satisfy_the_group_relations() {
    // Send the transposition to a matrix of order 3: the relation
    // checks must object.
    let g = s3();
    let three_cycle = ffla::FqMatrix::from_rows(
        gf2(),
        &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
    )
    .unwrap();
    let result = GModule::from_generator_matrices(
        &g,
        gf2(),
        vec![three_cycle.clone(), three_cycle],
    );
    assert!(matches!(result, Err(ModrepError::Validation(_))));
}

#[test]
fn spinning_a_generator_of_the_regular_module_fills_it() {
    let reg = GModule::regular_module(&s3(), gf2()).unwrap();
    let mut seed = vec![0u8; 6];
    seed[0] = 1;
    assert_eq!(reg.spin(&[seed]).unwrap().nrows(), 6);
    // A proper spin: the all-ones vector spans the trivial submodule.
    let fixed = reg.spin(&[vec![1; 6]]).unwrap();
    assert_eq!(fixed.nrows(), 1);
}

#[test]
fn decompositions_are_seed_independent() {
    let g = s5();
    let point = Subgroup::new(
        Arc::clone(&g),
        vec![
            Perm::from_cycles(5, &[vec![1, 2]]).unwrap(),
            Perm::from_cycles(5, &[vec![1, 2, 3, 4]]).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(point.order(), 24);
    let table = Arc::new(CosetTable::build(&g, &point).unwrap());
    let m = GModule::perm_module(&g, &table, gf2()).unwrap();
    let shape = |seed: u64| {
        let mut dims: Vec<(usize, usize)> = decompose(&m, seed)
            .unwrap()
            .iter()
            .map(|s| (s.dim(), s.multiplicity()))
            .collect();
        dims.sort_unstable();
        dims
    };
    let baseline = shape(0);
    assert_eq!(baseline.iter().map(|(d, m)| d * m).sum::<usize>(), 5);
    assert_eq!(baseline, shape(1));
    assert_eq!(baseline, shape(12345));
}
