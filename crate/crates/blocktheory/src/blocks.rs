//! Block membership and block projection of modules.
//!
//! # Method
//!
//! Both operations evaluate the action of a central idempotent
//! `e = Σ_x c(class x)·x` on a module without ever materializing all
//! `|G|` action matrices:
//!
//! * membership uses one random vector `v` and accumulates
//!   `c(class x)·(v·ρ(x))` per block over a breadth-first walk of the
//!   Cayley graph, where each step is one vector-matrix product. For a
//!   block-homogeneous module the idempotent acts as 0 or 1, so the
//!   accumulators decide membership exactly whatever `v` was; an
//!   accumulator that is neither 0 nor `v` certifies a mixed module.
//! * projection builds the full matrix of `e`. On a permutation-origin
//!   module row 0 costs one pass over the group (`row0[coset of x] +=
//!   c(class x)`) and row `i` is row 0 moved by the coset
//!   representative, because `e` is central. Without an origin table
//!   every basis row is accumulated over its own Cayley walk. The
//!   matrix is verified to be an idempotent commuting with all
//!   generator actions before its row space is taken.

use ffla::FqMatrix;
use modrep::GModule;
use permgrp::Perm;
use std::collections::HashMap;

use crate::center::Block;
use crate::{BlockError, Result};

/// Work cap (field operations) for Cayley-walk evaluations.
const WALK_WORK_CAP: u64 = 200_000_000_000;

fn check_context(m: &GModule, b: &Block) -> Result<()> {
    if !modrep::same_group(m.group(), b.classes().group()) {
        return Err(BlockError::Validation(
            "module and block live over different groups".into(),
        ));
    }
    if m.field().q() != b.field().q() {
        return Err(BlockError::Validation(format!(
            "module over GF({}) but block over GF({})",
            m.field().q(),
            b.field().q()
        )));
    }
    Ok(())
}

/// Breadth-first Cayley order: the elements, and for each non-root
/// element its parent index and the generator applied on the right.
type CayleyOrder = (Vec<Perm>, Vec<(usize, usize)>);

fn cayley_order(m: &GModule) -> Result<CayleyOrder> {
    let group = m.group();
    let gens: Vec<Perm> = group.generators().to_vec();
    let order = group.order() as usize;
    let mut index: HashMap<Perm, usize> = HashMap::with_capacity(order);
    let identity = Perm::identity(group.degree());
    let mut elements = vec![identity.clone()];
    let mut edges = vec![(0usize, 0usize)]; // root sentinel, unused
    index.insert(identity, 0);
    let mut cursor = 0;
    while cursor < elements.len() {
        let x = elements[cursor].clone();
        cursor += 1;
        for (j, g) in gens.iter().enumerate() {
            let y = x.mul(g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elements.len());
                elements.push(y);
                edges.push((cursor - 1, j));
            }
        }
    }
    assert_eq!(elements.len(), order, "the Cayley walk reaches every element");
    Ok((elements, edges))
}

/// The index of the unique block whose idempotent fixes `m`.
///
/// # Errors
///
/// [`BlockError::NotBlockHomogeneous`] when some idempotent acts
/// neither as zero nor as one; [`BlockError::CapExceeded`] when the
/// evaluation would overrun the work cap.
pub fn block_of(m: &GModule, blocks: &[Block], seed: u64) -> Result<usize> {
    assert!(!blocks.is_empty(), "block_of needs a candidate list");
    for b in blocks {
        check_context(m, b)?;
    }
    let classes = blocks[0].classes();
    let group = m.group();
    let n = m.dim();
    if n == 0 {
        return Err(BlockError::Validation("the zero module lies in every block".into()));
    }
    let work = group.order() * (group.generators().len().max(1) as u64) * (n as u64) * (n as u64);
    if work > WALK_WORK_CAP {
        return Err(BlockError::CapExceeded {
            op: "block_of",
            detail: format!("Cayley walk needs about {work} operations"),
        });
    }
    let field = m.field();
    let (elements, edges) = cayley_order(m)?;
    // Deterministic nonzero probe vector.
    let mut rng = <rand_chacha::ChaCha12Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0x424c_4f46);
    let v: Vec<u8> = loop {
        let cand: Vec<u8> = (0..n)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..field.q()) as u8)
            .collect();
        if cand.iter().any(|&c| c != 0) {
            break cand;
        }
    };
    let mut moved: Vec<Vec<u8>> = Vec::with_capacity(elements.len());
    moved.push(v.clone());
    for &(parent, gen) in &edges[1..] {
        moved.push(m.generator_action(gen).apply_row(&moved[parent])?);
    }
    let mut accs = vec![vec![0u8; n]; blocks.len()];
    for (x, row) in elements.iter().zip(moved.iter()) {
        let class = classes.class_of(x).expect("walk stays in the group") as usize;
        for (b, acc) in blocks.iter().zip(accs.iter_mut()) {
            let c = b.coeffs()[class];
            if c != 0 {
                for (ai, &ri) in acc.iter_mut().zip(row.iter()) {
                    *ai = field.add(*ai, field.mul(c, ri));
                }
            }
        }
    }
    let mut hit = None;
    for (i, acc) in accs.iter().enumerate() {
        if acc.iter().all(|&c| c == 0) {
            continue;
        }
        if *acc != v || hit.is_some() {
            return Err(BlockError::NotBlockHomogeneous(format!(
                "idempotent {i} acts neither as zero nor as one on a probe vector"
            )));
        }
        hit = Some(i);
    }
    hit.ok_or_else(|| {
        BlockError::NotBlockHomogeneous(
            "every idempotent annihilated the probe vector, contradicting Σe = 1".into(),
        )
    })
}

/// The matrix of the central idempotent of `b` acting on `m`, verified
/// idempotent and commuting with every generator action.
///
/// # Errors
///
/// [`BlockError::CapExceeded`] when neither evaluation route fits the
/// work cap.
pub fn central_matrix(m: &GModule, b: &Block) -> Result<FqMatrix> {
    check_context(m, b)?;
    let classes = b.classes();
    let group = m.group();
    let field = m.field();
    let n = m.dim();
    let mat = if let Some(table) = m.origin_table() {
        assert_eq!(table.len(), n, "origin table matches the module dimension");
        let mut row0 = vec![0u8; n];
        for x in group.enumerate()? {
            let class = classes.class_of(x).expect("enumerated element") as usize;
            let c = b.coeffs()[class];
            if c != 0 {
                let j = table.coset_of(x).expect("group element lies in some coset");
                row0[j] = field.add(row0[j], c);
            }
        }
        let mut rows = vec![vec![0u8; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            let t = table.rep(i);
            for (j, &c) in row0.iter().enumerate() {
                row[table.act(j, t)] = c;
            }
        }
        FqMatrix::from_rows(field, &rows)?
    } else {
        let work = group.order()
            * (group.generators().len().max(1) as u64)
            * (n as u64)
            * (n as u64)
            * (n as u64);
        if work > WALK_WORK_CAP {
            return Err(BlockError::CapExceeded {
                op: "central_matrix",
                detail: format!(
                    "no permutation origin and the Cayley walk needs about {work} operations"
                ),
            });
        }
        let (elements, edges) = cayley_order(m)?;
        let coeff_of: Vec<u8> = elements
            .iter()
            .map(|x| b.coeffs()[classes.class_of(x).expect("walk stays in the group") as usize])
            .collect();
        let mut rows = Vec::with_capacity(n);
        let mut moved: Vec<Vec<u8>> = vec![Vec::new(); elements.len()];
        for i in 0..n {
            let mut e = vec![0u8; n];
            e[i] = 1;
            moved[0] = e;
            let mut acc = vec![0u8; n];
            for idx in 0..elements.len() {
                if idx > 0 {
                    let (parent, gen) = edges[idx];
                    let row = m.generator_action(gen).apply_row(&moved[parent])?;
                    moved[idx] = row;
                }
                let c = coeff_of[idx];
                if c != 0 {
                    for (ai, &ri) in acc.iter_mut().zip(moved[idx].iter()) {
                        *ai = field.add(*ai, field.mul(c, ri));
                    }
                }
            }
            rows.push(acc);
        }
        FqMatrix::from_rows(field, &rows)?
    };
    let square = mat.multiply(&mat)?;
    assert!(square == mat, "a central idempotent squares to itself");
    for j in 0..m.generator_count() {
        let a = m.generator_action(j);
        assert!(
            a.multiply(&mat)? == mat.multiply(a)?,
            "a central idempotent commutes with the action"
        );
    }
    Ok(mat)
}

/// The direct summand `m·1_b` of `m`, as a module on the row space of
/// the idempotent's matrix (zero-dimensional for a foreign block).
///
/// # Errors
///
/// Propagated from [`central_matrix`].
pub fn block_project(m: &GModule, b: &Block) -> Result<GModule> {
    let mat = central_matrix(m, b)?;
    let image = mat.row_space();
    Ok(m.submodule(&image)?)
}
