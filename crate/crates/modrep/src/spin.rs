//! Spinning: closing vectors under generator actions.
//!
//! # Representation
//!
//! A [`SpinBasis`] records the basis in discovery order, a spanning
//! tree (`row = parent * matrix`), and optionally the closure
//! relations: for every basis row `i` and matrix `j` whose product did
//! not enlarge the span, the coefficients of `rows[i] * M_j` over the
//! basis. Tree plus relations determine a cyclic module completely,
//! which is what the homomorphism solver consumes. Spinning uses the
//! forward generator actions only: invariance under generators of a
//! finite group forces invariance under their inverses.

use ffla::{Echelonizer, FieldSpec, FqMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::{GModule, ModrepError, Result};

/// How a spin basis row came to be.
#[derive(Clone, Copy, Debug)]
pub(crate) enum SpinEdge {
    /// Row is one of the seed vectors.
    Seed,
    /// Row equals `rows[parent] * mats[mat]`.
    Child { parent: usize, mat: usize },
}

/// A closure relation `rows[row] * mats[mat] = sum coeffs[j] * rows[j]`.
#[derive(Clone, Debug)]
pub(crate) struct SpinRelation {
    pub row: usize,
    pub mat: usize,
    pub coeffs: Vec<u8>,
}

/// Basis of the smallest invariant subspace containing the seeds.
pub struct SpinBasis {
    ambient: usize,
    rows: Vec<Vec<u8>>,
    tree: Vec<SpinEdge>,
    relations: Vec<SpinRelation>,
}

impl SpinBasis {
    #[must_use]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether the spin filled the ambient space.
    #[must_use]
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Basis rows in discovery order as a matrix.
    ///
    /// # Errors
    ///
    /// Matrix construction errors only.
    pub fn basis_matrix(&self, field: FieldSpec) -> Result<FqMatrix> {
        Ok(FqMatrix::from_rows(field, &self.rows)?)
    }

    pub(crate) fn tree(&self) -> &[SpinEdge] {
        &self.tree
    }

    pub(crate) fn relations(&self) -> &[SpinRelation] {
        &self.relations
    }
}

/// Breadth-first closure of `seeds` under `mats`.
///
/// With `record_relations` the full `basis x matrix` schedule is
/// processed (no early exit) and every non-enlarging product is stored
/// as a [`SpinRelation`]; otherwise the spin stops as soon as the span
/// is the whole space.
pub(crate) fn spin_closure(
    field: FieldSpec,
    ambient: usize,
    mats: &[&FqMatrix],
    seeds: &[&[u8]],
    record_relations: bool,
) -> Result<SpinBasis> {
    let mut ech = Echelonizer::with_tracking(field, ambient);
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut tree = Vec::new();
    let mut relations = Vec::new();
    for seed in seeds {
        if seed.len() != ambient {
            return Err(ModrepError::BadInput {
                op: "spin",
                detail: format!("seed length {} != ambient {ambient}", seed.len()),
            });
        }
        if ech.insert(seed)? {
            rows.push(seed.to_vec());
            tree.push(SpinEdge::Seed);
        }
    }
    let mut next = 0usize;
    while next < rows.len() {
        if !record_relations && rows.len() == ambient {
            break;
        }
        for (j, m) in mats.iter().enumerate() {
            let image = m.apply_row(&rows[next])?;
            if ech.insert(&image)? {
                rows.push(image);
                tree.push(SpinEdge::Child {
                    parent: next,
                    mat: j,
                });
            } else if record_relations {
                let mut coeffs = ech
                    .express(&image)?
                    .expect("non-enlarging image lies in the span");
                coeffs.truncate(rows.len());
                relations.push(SpinRelation {
                    row: next,
                    mat: j,
                    coeffs,
                });
            }
        }
        next += 1;
    }
    Ok(SpinBasis {
        ambient,
        rows,
        tree,
        relations,
    })
}

impl GModule {
    /// Basis of the submodule generated by `seeds` (rows in module
    /// coordinates, discovery order).
    ///
    /// # Errors
    ///
    /// [`ModrepError::BadInput`] on malformed seeds.
    pub fn spin(&self, seeds: &[Vec<u8>]) -> Result<FqMatrix> {
        let mats: Vec<&FqMatrix> = (0..self.generator_count())
            .map(|j| self.generator_action(j))
            .collect();
        let seed_refs: Vec<&[u8]> = seeds.iter().map(Vec::as_slice).collect();
        let basis = spin_closure(self.field(), self.dim(), &mats, &seed_refs, false)?;
        basis.basis_matrix(self.field())
    }

    /// A vector generating the whole module together with its recorded
    /// spin (tree and relations), when one is found.
    ///
    /// Candidates are the first standard basis vectors followed by
    /// `tries` seeded random vectors, in that fixed order.
    pub(crate) fn find_cyclic_generator(
        &self,
        seed: u64,
        tries: usize,
    ) -> Result<Option<(Vec<u8>, SpinBasis)>> {
        let n = self.dim();
        if n == 0 {
            return Ok(None);
        }
        let mats: Vec<&FqMatrix> = (0..self.generator_count())
            .map(|j| self.generator_action(j))
            .collect();
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5350_494e);
        let mut candidates: Vec<Vec<u8>> = Vec::new();
        for i in 0..n.min(8) {
            let mut e = vec![0u8; n];
            e[i] = 1;
            candidates.push(e);
        }
        for _ in 0..tries {
            let v: Vec<u8> = (0..n)
                .map(|_| rng.gen_range(0..self.field().q()) as u8)
                .collect();
            if v.iter().any(|&c| c != 0) {
                candidates.push(v);
            }
        }
        for v in candidates {
            let quick = spin_closure(self.field(), n, &mats, &[v.as_slice()], false)?;
            if quick.is_full() {
                let full = spin_closure(self.field(), n, &mats, &[v.as_slice()], true)?;
                return Ok(Some((v, full)));
            }
        }
        Ok(None)
    }
}
