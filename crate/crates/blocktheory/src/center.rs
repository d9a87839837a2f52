//! The center of the group algebra and its primitive idempotents.
//!
//! # Representation
//!
//! The center of kG has the class sums as a basis. The structure
//! constants are counted by one pass over the group — for each target
//! class representative `z` and each element `x`, the product demand
//! `x·y = z` pins `y`, so the pair of classes of `x` and `y` receives
//! one count — and reduced mod 2. An element of the center is a
//! coefficient vector over the classes; multiplication routes through
//! the per-class right-multiplication matrices.
//!
//! # Method
//!
//! The number of blocks is certified before any search: a central
//! element is nilpotent exactly when its `q^M`-th power vanishes for
//! `q^M ≥ dim Z`, and since `c ↦ c^q` fixes the coefficient field,
//! both that power map and the Frobenius `z ↦ z^q` are linear over
//! GF(q). The radical is the kernel of the former; the fixed space of
//! the Frobenius on `Z/J(Z)` decomposes as one line per simple factor,
//! so its dimension *is* the number of blocks. Idempotents are then
//! found by factoring minimal polynomials of seeded random central
//! elements on the ideals of the current decomposition and lifting the
//! CRT idempotents, until the certified count is reached; each split
//! is verified exactly (idempotency, orthogonality, sum).
//!
//! # Determinism
//!
//! The random central elements come from a ChaCha12 stream seeded by
//! the caller; classes are canonically ordered, so the resulting block
//! list is reproducible. Blocks are sorted principal-first, then by
//! coefficient vector.

use std::sync::Arc;

use ffla::poly::{self, Poly};
use ffla::{Echelonizer, FieldSpec, FqMatrix};
use modrep::SimpleLabel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::classes::ClassData;
use crate::{BlockError, Result};

/// Largest class count accepted for center arithmetic.
const CLASS_COUNT_CAP: usize = 128;
/// Random central elements tried before the splitting search aborts.
const SPLIT_CAP: usize = 64;

/// One 2-block of a group algebra: a primitive central idempotent
/// with the bookkeeping the pipeline attaches to it.
pub struct Block {
    classes: Arc<ClassData>,
    field: FieldSpec,
    coeffs: Vec<u8>,
    principal: bool,
    /// Labels of the simple modules lying in this block, in the order
    /// the caller established them; empty until filled.
    pub simples: Vec<SimpleLabel>,
    /// Largest elementary divisor of the Cartan matrix, once known.
    pub defect_order: Option<u64>,
}

impl Block {
    #[must_use]
    pub fn classes(&self) -> &Arc<ClassData> {
        &self.classes
    }

    #[must_use]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Idempotent coefficients, one per conjugacy class in canonical
    /// class order.
    #[must_use]
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Whether this is the principal block (the trivial module's
    /// central character sends the idempotent to 1).
    #[must_use]
    pub fn is_principal(&self) -> bool {
        self.principal
    }
}

/// The class-sum algebra of a group over a field of characteristic 2.
pub struct CenterAlgebra {
    classes: Arc<ClassData>,
    field: FieldSpec,
    /// `right_mults[a][b][c]` is the coefficient of class `c` in
    /// `K_b · K_a`, so right multiplication by `K_a` is `v ↦ v·M_a`.
    right_mults: Vec<FqMatrix>,
    /// Certified number of primitive idempotents.
    num_blocks: usize,
    /// Dimension of the radical of the center.
    radical_dim: usize,
}

impl CenterAlgebra {
    /// Build the class-sum algebra and certify its block count.
    ///
    /// # Errors
    ///
    /// [`BlockError::TooLarge`] above [`CLASS_COUNT_CAP`] classes;
    /// propagated arithmetic failures.
    pub fn new(classes: Arc<ClassData>, field: FieldSpec) -> Result<Self> {
        let nc = classes.count();
        if nc > CLASS_COUNT_CAP {
            return Err(BlockError::TooLarge {
                op: "center construction",
                detail: format!("{nc} classes exceed the cap of {CLASS_COUNT_CAP}"),
            });
        }
        // parity[a][b][c] = N_{ab}^c mod 2, counted elementwise.
        let mut parity = vec![0u8; nc * nc * nc];
        {
            let group = classes.group();
            let elements = group.enumerate()?;
            for x in elements {
                let a = classes.class_of(x).expect("enumerated element") as usize;
                let xinv = x.inverse();
                for c in 0..nc {
                    let y = xinv.mul(classes.rep(c));
                    let b = classes.class_of(&y).expect("closed under products") as usize;
                    parity[(a * nc + b) * nc + c] ^= 1;
                }
            }
        }
        for a in 0..nc {
            for b in 0..nc {
                for c in 0..nc {
                    assert_eq!(
                        parity[(a * nc + b) * nc + c],
                        parity[(b * nc + a) * nc + c],
                        "the class algebra is commutative"
                    );
                }
            }
        }
        let mut right_mults = Vec::with_capacity(nc);
        for a in 0..nc {
            let m = FqMatrix::from_fn(field, nc, nc, |b, c| parity[(b * nc + a) * nc + c])?;
            right_mults.push(m);
        }
        assert!(
            right_mults[0].is_identity(),
            "the identity class sum is the identity of the center"
        );
        let mut alg = CenterAlgebra {
            classes,
            field,
            right_mults,
            num_blocks: 0,
            radical_dim: 0,
        };
        let (r, j) = alg.certify_block_count()?;
        alg.num_blocks = r;
        alg.radical_dim = j;
        Ok(alg)
    }

    /// Dimension of the center (number of classes).
    #[must_use]
    pub fn dim(&self) -> usize {
        self.classes.count()
    }

    /// Certified number of blocks.
    #[must_use]
    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    /// Dimension of the radical of the center.
    #[must_use]
    pub fn radical_dim(&self) -> usize {
        self.radical_dim
    }

    #[must_use]
    pub fn classes(&self) -> &Arc<ClassData> {
        &self.classes
    }

    /// The identity element.
    fn one(&self) -> Vec<u8> {
        let mut e = vec![0u8; self.dim()];
        e[0] = 1;
        e
    }

    /// Product of two central elements in class-sum coordinates.
    fn mul(&self, u: &[u8], v: &[u8]) -> Result<Vec<u8>> {
        let mut acc = vec![0u8; self.dim()];
        for (b, &vb) in v.iter().enumerate() {
            if vb == 0 {
                continue;
            }
            let term = self.right_mults[b].apply_row(u)?;
            for (ai, ti) in acc.iter_mut().zip(term.iter()) {
                *ai = self.field.add(*ai, self.field.mul(vb, *ti));
            }
        }
        Ok(acc)
    }

    /// Matrix of the GF(q)-linear Frobenius `z ↦ z^q` on the center.
    fn frobenius_matrix(&self) -> Result<FqMatrix> {
        let nc = self.dim();
        let squarings = self.field.q().trailing_zeros();
        let mut rows = Vec::with_capacity(nc);
        for a in 0..nc {
            let mut z = vec![0u8; nc];
            z[a] = 1;
            for _ in 0..squarings {
                z = self.mul(&z, &z)?;
            }
            rows.push(z);
        }
        Ok(FqMatrix::from_rows(self.field, &rows)?)
    }

    /// The exact block count: `dim ker(Frobenius − id)` on `Z/J(Z)`,
    /// together with `dim J(Z)`.
    fn certify_block_count(&self) -> Result<(usize, usize)> {
        let nc = self.dim();
        let frob = self.frobenius_matrix()?;
        // Nilpotency exponent: q^m ≥ nc kills every nilpotent.
        let mut m = 0u32;
        let mut power = 1usize;
        while power < nc {
            power = power.saturating_mul(self.field.q() as usize);
            m += 1;
        }
        let kill = frob.pow(m as u64)?;
        let radical = kill.transpose().nullspace();
        let j = radical.nrows();
        // Extend the radical to a basis; quotient coordinates last.
        let mut ech = Echelonizer::new(self.field, nc);
        let mut basis_rows: Vec<Vec<u8>> = Vec::with_capacity(nc);
        for i in 0..j {
            let fresh = ech.insert(&radical.row(i))?;
            assert!(fresh, "radical basis rows are independent");
            basis_rows.push(radical.row(i));
        }
        for i in 0..nc {
            let mut unit = vec![0u8; nc];
            unit[i] = 1;
            if ech.insert(&unit)? {
                basis_rows.push(unit);
            }
        }
        assert_eq!(basis_rows.len(), nc, "a radical basis extends to the space");
        let b = FqMatrix::from_rows(self.field, &basis_rows)?;
        let binv = b.invert()?;
        let conj = b.multiply(&frob)?.multiply(&binv)?;
        // The radical is Frobenius-invariant, so the top-right block
        // vanishes and the bottom-right block is the quotient action.
        let q_dim = nc - j;
        for i in 0..j {
            let row = conj.row(i);
            assert!(
                row[j..].iter().all(|&c| c == 0),
                "the Frobenius preserves the radical"
            );
        }
        let quotient = FqMatrix::from_fn(self.field, q_dim, q_dim, |r, c| {
            conj.get(j + r, j + c)
        })?;
        let fixed = quotient.add(&FqMatrix::identity(self.field, q_dim)?)?;
        let r = fixed.transpose().nullspace().nrows();
        assert!(r >= 1, "the center has at least one block");
        Ok((r, j))
    }

    /// `f(z)` evaluated in the unital ideal with identity `e` (the
    /// constant term multiplies `e`, not the identity of the center).
    fn eval_in_ideal(&self, f: &Poly, z: &[u8], e: &[u8]) -> Result<Vec<u8>> {
        let mut acc = vec![0u8; self.dim()];
        for &c in f.iter().rev() {
            acc = self.mul(&acc, z)?;
            if c != 0 {
                for (ai, &ei) in acc.iter_mut().zip(e.iter()) {
                    *ai = self.field.add(*ai, self.field.mul(c, ei));
                }
            }
        }
        Ok(acc)
    }

    /// Split one idempotent along the primary parts of the minimal
    /// polynomial of `z = e·v` acting on the ideal `eZ`; `None` when
    /// the polynomial is primary.
    fn split_idempotent(&self, e: &[u8], v: &[u8]) -> Result<Option<Vec<Vec<u8>>>> {
        let nc = self.dim();
        let z = self.mul(e, v)?;
        // Basis of the ideal eZ.
        let mut ech = Echelonizer::with_tracking(self.field, nc);
        let mut ideal_rows: Vec<Vec<u8>> = Vec::new();
        for a in 0..nc {
            let row = self.right_mults[a].apply_row(e)?;
            if ech.insert(&row)? {
                ideal_rows.push(row);
            }
        }
        let m = ideal_rows.len();
        assert!(m > 0, "an idempotent generates a nonzero ideal");
        // Action of z on the ideal in that basis.
        let mut action_rows = Vec::with_capacity(m);
        for w in &ideal_rows {
            let moved = self.mul(w, &z)?;
            let mut coords = ech
                .express(&moved)?
                .expect("the ideal is closed under multiplication");
            coords.truncate(m);
            action_rows.push(coords);
        }
        let action = FqMatrix::from_rows(self.field, &action_rows)?;
        let mp = poly::minpoly(&action)?;
        let factors = poly::factor(self.field, &mp)?;
        if factors.len() < 2 {
            return Ok(None);
        }
        let mut parts = Vec::with_capacity(factors.len());
        for (p, mult) in &factors {
            let mut part = poly::constant(1);
            for _ in 0..*mult {
                part = poly::mul(self.field, &part, p);
            }
            parts.push(part);
        }
        let idem_polys = poly::coprime_idempotents(self.field, &parts)?;
        let mut pieces = Vec::with_capacity(idem_polys.len());
        let mut sum = vec![0u8; nc];
        for f in &idem_polys {
            let et = self.eval_in_ideal(f, &z, e)?;
            assert_eq!(self.mul(&et, &et)?, et, "a CRT idempotent squares to itself");
            for (si, &ei) in sum.iter_mut().zip(et.iter()) {
                *si = self.field.add(*si, ei);
            }
            pieces.push(et);
        }
        assert_eq!(&sum, e, "CRT idempotents sum to the idempotent they split");
        for (i, a) in pieces.iter().enumerate() {
            for b in pieces.iter().skip(i + 1) {
                let prod = self.mul(a, b)?;
                assert!(prod.iter().all(|&c| c == 0), "CRT idempotents are orthogonal");
            }
        }
        Ok(Some(pieces))
    }

    /// The complete list of primitive central idempotents as blocks.
    ///
    /// # Errors
    ///
    /// [`BlockError::CapExceeded`] if the splitting search does not
    /// reach the certified block count within its attempt budget.
    pub fn block_idempotents(&self, seed: u64) -> Result<Vec<Block>> {
        let nc = self.dim();
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x424c_4f43);
        let mut pool = vec![self.one()];
        for _ in 0..SPLIT_CAP {
            if pool.len() == self.num_blocks {
                break;
            }
            let v: Vec<u8> = (0..nc)
                .map(|_| rng.gen_range(0..self.field.q()) as u8)
                .collect();
            let mut next = Vec::with_capacity(pool.len());
            for e in &pool {
                match self.split_idempotent(e, &v)? {
                    Some(pieces) => next.extend(pieces),
                    None => next.push(e.clone()),
                }
            }
            pool = next;
        }
        if pool.len() != self.num_blocks {
            return Err(BlockError::CapExceeded {
                op: "block_idempotents",
                detail: format!(
                    "splitting stalled at {} of {} certified idempotents after {SPLIT_CAP} rounds",
                    pool.len(),
                    self.num_blocks
                ),
            });
        }
        // Exact global checks: partition of unity by orthogonal
        // idempotents.
        let mut sum = vec![0u8; nc];
        for e in &pool {
            assert_eq!(self.mul(e, e)?, *e, "block idempotents are idempotent");
            for (si, &ei) in sum.iter_mut().zip(e.iter()) {
                *si = self.field.add(*si, ei);
            }
        }
        assert_eq!(sum, self.one(), "block idempotents sum to the identity");
        for (i, a) in pool.iter().enumerate() {
            for b in pool.iter().skip(i + 1) {
                let prod = self.mul(a, b)?;
                assert!(prod.iter().all(|&c| c == 0), "block idempotents are orthogonal");
            }
        }
        // The trivial module's central character sends K_a to |C_a|·1.
        let mut blocks: Vec<Block> = Vec::with_capacity(pool.len());
        let mut principal_count = 0;
        for coeffs in pool {
            let mut lambda = 0u8;
            for (a, &c) in coeffs.iter().enumerate() {
                if self.classes.size(a) % 2 == 1 {
                    lambda = self.field.add(lambda, c);
                }
            }
            assert!(lambda <= 1, "a central character maps idempotents to 0 or 1");
            let principal = lambda == 1;
            if principal {
                principal_count += 1;
            }
            blocks.push(Block {
                classes: Arc::clone(&self.classes),
                field: self.field,
                coeffs,
                principal,
                simples: Vec::new(),
                defect_order: None,
            });
        }
        assert_eq!(principal_count, 1, "exactly one block is principal");
        blocks.sort_by(|a, b| {
            b.principal
                .cmp(&a.principal)
                .then_with(|| a.coeffs.cmp(&b.coeffs))
        });
        Ok(blocks)
    }
}

/// All 2-blocks of the group algebra kG.
///
/// Enumerates the classes, builds the class-sum algebra, certifies the
/// block count, and splits the identity.
///
/// # Errors
///
/// [`BlockError::TooLarge`] for groups beyond the enumeration caps;
/// [`BlockError::CapExceeded`] if splitting stalls.
pub fn block_idempotents(
    group: &Arc<permgrp::PermGroup>,
    field: FieldSpec,
    seed: u64,
) -> Result<Vec<Block>> {
    let classes = Arc::new(ClassData::compute(group)?);
    let center = CenterAlgebra::new(classes, field)?;
    center.block_idempotents(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use permgrp::{Perm, PermGroup};

    fn s3() -> Arc<PermGroup> {
        let gens = vec![
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
        ];
        Arc::new(PermGroup::new(3, gens).unwrap())
    }

    #[test]
    fn s3_center_splits_into_two_blocks() {
        let field = FieldSpec::new(4).unwrap();
        let classes = Arc::new(ClassData::compute(&s3()).unwrap());
        let center = CenterAlgebra::new(classes, field).unwrap();
        assert_eq!(center.dim(), 3);
        // Z/J ≅ k × k: one line per block, radical dimension 1.
        assert_eq!(center.num_blocks(), 2);
        assert_eq!(center.radical_dim(), 1);
        let blocks = center.block_idempotents(0).unwrap();
        assert_eq!(blocks.len(), 2);
        // Classes sort as identity < transpositions < 3-cycles. The
        // defect-zero idempotent is the sum of the two 3-cycles, and
        // the principal idempotent is its complement.
        assert!(blocks[0].is_principal());
        assert_eq!(blocks[0].coeffs(), &[1, 0, 1]);
        assert!(!blocks[1].is_principal());
        assert_eq!(blocks[1].coeffs(), &[0, 0, 1]);
    }

    #[test]
    fn a_2_group_has_a_single_block() {
        let gens = vec![Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap(),
                        Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap()];
        let group = Arc::new(PermGroup::new(4, gens).unwrap());
        let field = FieldSpec::new(2).unwrap();
        let blocks = block_idempotents(&group, field, 7).unwrap();
        assert_eq!(blocks.len(), 1);
        let mut one = vec![0u8; blocks[0].classes().count()];
        one[0] = 1;
        assert_eq!(blocks[0].coeffs(), &one[..]);
        assert!(blocks[0].is_principal());
    }
}
