//! Homomorphism spaces between modules over the same group.
//!
//! # Routes
//!
//! `hom_space` picks the cheapest sound route, in this fixed order:
//!
//! 1. **Cyclic source.** If a vector generating the source is found,
//!    a homomorphism is determined by the image `t` of that vector,
//!    and the spin relations of the source become linear constraints
//!    on `t`. This solves `Hom(S, m)` for any simple `S` without ever
//!    touching `dim(S) * dim(m)` unknowns.
//! 2. **Cyclic dual target.** `Hom(a, b)` is the transpose image of
//!    `Hom(b*, a*)`, so a cyclic dual target (any simple target, in
//!    particular) reduces to route 1.
//! 3. **Dense unknowns.** For small `dim(a) * dim(b)` the intertwining
//!    conditions are echelonized directly.
//!
//! Anything else is refused with `CapExceeded` rather than attempted
//! slowly.
//!
//! Endomorphism rings of permutation modules have an exact basis that
//! bypasses all solving: the orbital matrices of the point-pair orbits
//! ([`orbital_end`]). Decomposition leans on that basis instead of
//! `end_space` wherever a coset-table origin is available.

use ffla::{Echelonizer, FieldSpec, FqMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chop::fingerprint_screen;
use crate::spin::SpinEdge;
use crate::{GModule, ModrepError, Result};

/// Unknown-count bound for the dense route.
const KRON_CAP: usize = 1536;
/// Byte-operation estimate bound for the cyclic routes.
const CYCLIC_WORK_CAP: u64 = 1 << 35;
/// Random invertibility trials in [`is_isomorphic`].
const ISO_TRIALS: usize = 64;
/// Exhaustive invertibility sweep bound (span size) in [`is_isomorphic`].
const ISO_SWEEP: u64 = 4096;

/// The orbit labelling of point pairs under the diagonal action, the
/// exact endomorphism basis of a permutation module: one 0/1 matrix
/// per orbit, supported on the pairs carrying that label.
pub struct OrbitalEnd {
    degree: usize,
    labels: Vec<u32>,
    count: usize,
}

impl OrbitalEnd {
    /// Number of orbitals, equal to `dim End` of the permutation module.
    #[must_use]
    pub fn count(&self) -> usize {
        self.count
    }

    /// Pair-orbit labels in row-major order, one per `(i, j)`.
    #[must_use]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// The endomorphism with the given coefficient per orbital.
    ///
    /// # Errors
    ///
    /// [`ModrepError::BadInput`] if `coeffs` has the wrong length.
    ///
    /// # Panics
    ///
    /// Panics if a coefficient is not reduced modulo the field size.
    pub fn materialize(&self, field: FieldSpec, coeffs: &[u8]) -> Result<FqMatrix> {
        if coeffs.len() != self.count {
            return Err(ModrepError::BadInput {
                op: "orbital materialize",
                detail: format!("{} coefficients for {} orbitals", coeffs.len(), self.count),
            });
        }
        assert!(
            coeffs.iter().all(|&c| (c as u16) < field.q()),
            "orbital coefficients must be reduced field elements"
        );
        let n = self.degree;
        Ok(FqMatrix::from_fn(field, n, n, |i, j| {
            coeffs[self.labels[i * n + j] as usize]
        })?)
    }
}

/// Orbit labelling of point pairs for a permutation-origin module.
///
/// # Errors
///
/// [`ModrepError::BadInput`] if the module was not built from a coset
/// table (the basis carries no point action to take pairs of).
pub fn orbital_end(m: &GModule) -> Result<OrbitalEnd> {
    let Some(table) = m.origin_table() else {
        return Err(ModrepError::BadInput {
            op: "orbital_end",
            detail: "module has no permutation origin".into(),
        });
    };
    let n = table.len();
    let ngens = m.group().generators().len();
    let actions: Vec<&[u32]> = (0..ngens).map(|j| table.action(j)).collect();
    let mut labels = vec![u32::MAX; n * n];
    let mut count = 0u32;
    let mut queue: Vec<(u32, u32)> = Vec::new();
    for start in 0..n * n {
        if labels[start] != u32::MAX {
            continue;
        }
        labels[start] = count;
        queue.clear();
        queue.push(((start / n) as u32, (start % n) as u32));
        while let Some((x, y)) = queue.pop() {
            for action in &actions {
                let (xi, yi) = (action[x as usize], action[y as usize]);
                let cell = xi as usize * n + yi as usize;
                if labels[cell] == u32::MAX {
                    labels[cell] = count;
                    queue.push((xi, yi));
                }
            }
        }
        count += 1;
    }
    Ok(OrbitalEnd {
        degree: n,
        labels,
        count: count as usize,
    })
}

/// Basis of `Hom_kG(a, b)` as matrices `F` with `v |-> v * F`.
///
/// # Errors
///
/// [`ModrepError::GroupMismatch`] / [`ModrepError::FieldMismatch`] if
/// the modules do not live over the same group and field, and
/// [`ModrepError::CapExceeded`] when no route fits the size bounds.
pub fn hom_space(a: &GModule, b: &GModule, seed: u64) -> Result<Vec<FqMatrix>> {
    check_compatible(a, b)?;
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Vec::new());
    }
    if cyclic_work(a, b) <= CYCLIC_WORK_CAP {
        if let Some((_, spin)) = a.find_cyclic_generator(seed, 8)? {
            return hom_from_cyclic(a, b, &spin);
        }
    }
    let (da, db) = (b.dual(), a.dual());
    if cyclic_work(&da, &db) <= CYCLIC_WORK_CAP {
        if let Some((_, spin)) = da.find_cyclic_generator(seed, 8)? {
            let duals = hom_from_cyclic(&da, &db, &spin)?;
            return duals.iter().map(|f| Ok(f.transpose())).collect();
        }
    }
    if a.dim() * b.dim() <= KRON_CAP {
        return hom_dense(a, b);
    }
    Err(ModrepError::CapExceeded {
        op: "hom_space",
        detail: format!(
            "no route for Hom of dim {} into dim {} (source and dual target non-cyclic)",
            a.dim(),
            b.dim()
        ),
    })
}

/// Basis of the endomorphism ring `End_kG(m)`.
///
/// This routes through [`hom_space`]; for large permutation modules
/// prefer [`orbital_end`], which is exact and essentially free.
///
/// # Errors
///
/// As for [`hom_space`].
pub fn end_space(m: &GModule, seed: u64) -> Result<Vec<FqMatrix>> {
    hom_space(m, m, seed)
}

fn check_compatible(a: &GModule, b: &GModule) -> Result<()> {
    if !crate::module::same_group(a.group(), b.group()) {
        return Err(ModrepError::GroupMismatch(
            "hom requires both modules over the same group value",
        ));
    }
    if a.field().q() != b.field().q() {
        return Err(ModrepError::FieldMismatch(a.field().q(), b.field().q()));
    }
    Ok(())
}

fn cyclic_work(a: &GModule, b: &GModule) -> u64 {
    let (na, nb, g) = (a.dim() as u64, b.dim() as u64, a.generator_count() as u64);
    // Worst case of the relation sweep: one dense basis combination of
    // target-sized matrices per closure relation.
    na * na * g * nb * nb
}

/// Solve for homomorphisms out of a module with a recorded full spin.
fn hom_from_cyclic(a: &GModule, b: &GModule, spin: &crate::spin::SpinBasis) -> Result<Vec<FqMatrix>> {
    assert!(spin.is_full(), "cyclic solver needs a generating spin");
    let field = b.field();
    let (na, nb) = (a.dim(), b.dim());
    // Word matrices: row i of any hom image is t * word[i].
    let mut words: Vec<FqMatrix> = Vec::with_capacity(na);
    for edge in spin.tree() {
        match *edge {
            SpinEdge::Seed => words.push(FqMatrix::identity(field, nb)?),
            SpinEdge::Child { parent, mat } => {
                words.push(words[parent].multiply(b.generator_action(mat))?);
            }
        }
    }
    // Each closure relation pins t to the nullspace of one matrix.
    let mut constraints = Echelonizer::new(field, nb);
    'relations: for rel in spin.relations() {
        let mut m = words[rel.row].multiply(b.generator_action(rel.mat))?;
        for (j, &c) in rel.coeffs.iter().enumerate() {
            if c != 0 {
                m = m.add(&words[j].scale(c)?)?;
            }
        }
        let mt = m.transpose();
        for r in 0..mt.nrows() {
            constraints.insert(&mt.row(r))?;
            if constraints.rank() == nb {
                break 'relations;
            }
        }
    }
    if constraints.rank() == nb {
        return Ok(Vec::new());
    }
    let images: Vec<Vec<u8>> = if constraints.rank() == 0 {
        (0..nb)
            .map(|i| {
                let mut e = vec![0u8; nb];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        let c = constraints.basis_matrix();
        let ns = c.nullspace();
        (0..ns.nrows()).map(|r| ns.row(r)).collect()
    };
    // Convert each admissible image t into a matrix in standard
    // coordinates: spin coordinates first, then change of basis.
    let basis = spin.basis_matrix(field)?;
    let basis_inv = basis.invert()?;
    let mut homs = Vec::with_capacity(images.len());
    for t in images {
        let mut rows = Vec::with_capacity(na);
        for w in &words {
            rows.push(w.apply_row(&t)?);
        }
        let in_spin = FqMatrix::from_rows(field, &rows)?;
        let f = basis_inv.multiply(&in_spin)?;
        homs.push(f);
    }
    if let Some(f) = homs.first() {
        for j in 0..a.generator_count() {
            debug_assert!(
                a.generator_action(j).multiply(f).expect("product") == f.multiply(b.generator_action(j)).expect("product"),
                "cyclic hom solution fails to intertwine"
            );
        }
    }
    Ok(homs)
}

/// Echelonize the intertwining conditions over all matrix entries.
fn hom_dense(a: &GModule, b: &GModule) -> Result<Vec<FqMatrix>> {
    let field = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let unknowns = na * nb;
    let mut constraints = Echelonizer::new(field, unknowns);
    let mut row = vec![0u8; unknowns];
    for g in 0..a.generator_count() {
        let ag = a.generator_action(g);
        let bg = b.generator_action(g);
        for i in 0..na {
            for j in 0..nb {
                // Condition (i, j) of A_g F - F B_g = 0.
                row.iter_mut().for_each(|c| *c = 0);
                for x in 0..na {
                    let c = ag.get(i, x);
                    if c != 0 {
                        row[x * nb + j] = field.add(row[x * nb + j], c);
                    }
                }
                for y in 0..nb {
                    let c = bg.get(y, j);
                    if c != 0 {
                        row[i * nb + y] = field.add(row[i * nb + y], c);
                    }
                }
                constraints.insert(&row)?;
            }
        }
        if constraints.rank() == unknowns {
            return Ok(Vec::new());
        }
    }
    let sols = if constraints.rank() == 0 {
        FqMatrix::identity(field, unknowns)?
    } else {
        constraints.basis_matrix().nullspace()
    };
    let mut homs = Vec::with_capacity(sols.nrows());
    for r in 0..sols.nrows() {
        let flat = sols.row(r);
        homs.push(FqMatrix::from_fn(field, na, nb, |i, j| flat[i * nb + j])?);
    }
    Ok(homs)
}

/// Whether `a` and `b` are isomorphic modules.
///
/// Non-isomorphism is mostly settled by the label screen; otherwise an
/// invertible element of `Hom(a, b)` is searched for, exhaustively when
/// the hom space is tiny and by 64 seeded samples when not. For
/// indecomposables the samples miss an existing isomorphism with
/// probability at most `q^-64`, since the non-invertible homs form a
/// proper subspace; a `false` from the sampling path is reproducible
/// for a fixed seed but carries that caveat.
///
/// # Errors
///
/// Mismatched groups or fields, or hom-space route failures.
pub fn is_isomorphic(a: &GModule, b: &GModule, seed: u64) -> Result<bool> {
    check_compatible(a, b)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    if a.dim() == 0 {
        return Ok(true);
    }
    if fingerprint_screen(a)? != fingerprint_screen(b)? {
        return Ok(false);
    }
    let homs = hom_space(a, b, seed)?;
    if homs.is_empty() {
        return Ok(false);
    }
    let q = a.field().q() as u64;
    let h = homs.len();
    let span = q.checked_pow(h.min(63) as u32).unwrap_or(u64::MAX);
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x49534f4d);
    for _ in 0..ISO_TRIALS {
        let coeffs: Vec<u8> = (0..h)
            .map(|_| rng.gen_range(0..a.field().q()) as u8)
            .collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        if combine(&homs, &coeffs)?.rank() == a.dim() {
            return Ok(true);
        }
    }
    if span <= ISO_SWEEP {
        let mut coeffs = vec![0u8; h];
        while odometer(&mut coeffs, a.field().q() as u8) {
            if combine(&homs, &coeffs)?.rank() == a.dim() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn combine(homs: &[FqMatrix], coeffs: &[u8]) -> Result<FqMatrix> {
    let mut acc: Option<FqMatrix> = None;
    for (f, &c) in homs.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let term = f.scale(c)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("nonzero coefficient vector"))
}

/// Advance a base-q counter; false once it wraps to zero.
fn odometer(digits: &mut [u8], q: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}
