//! Composition series and canonical labels for the factors.
//!
//! # Method
//!
//! `chop` is the meataxe. A random element `z` of the acting algebra
//! is sampled, its minimal polynomial factored, and for each
//! irreducible factor `p` the kernel of `p(z)` is spun. When the
//! kernel dimension equals `deg p` the factor is decisive: the kernel
//! is one-dimensional over `k[x]/(p)`, so a proper submodule meets it
//! in the whole kernel and a single spin on each side settles the
//! question — if both the kernel spin and the transposed-side kernel
//! spin fill the space, the module is irreducible; a proper
//! transposed-side span has a proper perpendicular submodule.
//! Indecisive factors still donate their kernel vectors as cheap
//! submodule candidates.
//!
//! # Labels
//!
//! A composition factor is identified by dimension and a fingerprint:
//! the multiset of characteristic polynomials of a fixed word list
//! evaluated in the factor, hashed. The word list depends only on the
//! generator count, so equal labels over one group mean isomorphic
//! factors; the registry double-checks that with an explicit
//! homomorphism whenever two distinct factor objects collide on a
//! label, and panics on a genuine collision rather than mislabel.
//! Duality is marked on the label: the member of a dual pair with the
//! lexicographically smaller fingerprint is the unstarred one.

use std::collections::BTreeMap;
use std::fmt;

use ffla::poly::{self, Poly};
use ffla::FqMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::homs::{end_space, is_isomorphic};
use crate::spin::spin_closure;
use crate::{check_dim_cap, GModule, ModrepError, Result};
use permgrp::{GenTok, Word};

/// Random algebra elements tried before giving up on a split.
const MEATAXE_ATTEMPTS: usize = 64;
/// Kernel vectors spun per indecisive factor.
const NULLITY_SPIN_BOUND: usize = 8;
/// Deterministic words in the fingerprint list.
const FINGERPRINT_SHORT_WORDS: usize = 24;
/// Seeded words appended to the fingerprint list.
const FINGERPRINT_RANDOM_WORDS: usize = 16;
/// Seed for the appended fingerprint words; fixed, never user-visible.
const FINGERPRINT_SEED: u64 = 0x4d52_4550_4650;

/// Position of a simple module relative to its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DualMark {
    /// Isomorphic to its own dual.
    SelfDual,
    /// Dual pair member with the smaller fingerprint.
    PairFirst,
    /// Dual pair member with the larger fingerprint; printed starred.
    PairSecond,
}

/// Canonical name of a composition factor over a fixed group and field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleLabel {
    pub dim: usize,
    pub fingerprint: String,
    pub dual_mark: DualMark,
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.dual_mark == DualMark::PairSecond {
            "*"
        } else {
            ""
        };
        write!(f, "{}{}[{}]", self.dim, star, &self.fingerprint[..6])
    }
}

/// Multiset of composition-factor labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorMultiset(BTreeMap<SimpleLabel, usize>);

impl FactorMultiset {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: SimpleLabel, count: usize) {
        if count > 0 {
            *self.0.entry(label).or_insert(0) += count;
        }
    }

    /// Multiplicity of one label.
    #[must_use]
    pub fn count(&self, label: &SimpleLabel) -> usize {
        self.0.get(label).copied().unwrap_or(0)
    }

    /// Number of distinct labels.
    #[must_use]
    pub fn distinct(&self) -> usize {
        self.0.len()
    }

    /// Total number of factors, multiplicities included.
    #[must_use]
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimpleLabel, usize)> {
        self.0.iter().map(|(l, &c)| (l, c))
    }

    /// Collapse to `dimension -> multiplicity`, the form most
    /// expectation tables are stated in.
    #[must_use]
    pub fn dim_multiset(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (label, count) in self.iter() {
            *out.entry(label.dim).or_insert(0) += count;
        }
        out
    }

    /// Sum of `dim * multiplicity`.
    #[must_use]
    pub fn total_dim(&self) -> usize {
        self.iter().map(|(l, c)| l.dim * c).sum()
    }
}

impl fmt::Display for FactorMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (label, count) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if count == 1 {
                write!(f, "{label}")?;
            } else {
                write!(f, "{label} x {count}")?;
            }
        }
        Ok(())
    }
}

/// Ascending composition series with its factors.
pub struct CompositionSeries {
    /// Bases of the proper terms and finally the whole module; entry
    /// `i` spans the first `i + 1` steps, rows in module coordinates.
    pub filtration: Vec<FqMatrix>,
    /// Factor modules, bottom first.
    pub factors: Vec<GModule>,
    /// Label of each factor, aligned with `factors`.
    pub labels: Vec<SimpleLabel>,
}

/// Everything `chop` knows when it is done.
pub struct ChopResult {
    pub series: CompositionSeries,
    pub multiset: FactorMultiset,
    /// One representative module per distinct label, sorted by label.
    pub simples: Vec<(SimpleLabel, GModule)>,
}

/// Composition factors of `m` with multiplicity, plus the series that
/// exhibits them.
///
/// # Errors
///
/// [`ModrepError::FieldTooSmall`] when a factor is irreducible but not
/// absolutely irreducible (its endomorphism ring is a proper field
/// extension), [`ModrepError::CapExceeded`] when the meataxe exhausts
/// its attempts, and size-cap violations.
pub fn chop(m: &GModule, seed: u64) -> Result<ChopResult> {
    check_dim_cap(m.dim())?;
    let steps = chop_rec(m, seed)?;
    let total: usize = steps.iter().map(|(_, f)| f.dim()).sum();
    assert_eq!(total, m.dim(), "composition factors must account for every dimension");

    let mut filtration = Vec::with_capacity(steps.len());
    let mut factors = Vec::with_capacity(steps.len());
    for (basis, factor) in steps {
        filtration.push(basis);
        factors.push(factor);
    }
    let mut labels = Vec::with_capacity(factors.len());
    let mut simples: Vec<(SimpleLabel, GModule)> = Vec::new();
    for factor in &factors {
        let label = label_of(factor)?;
        match simples.iter().find(|(l, _)| *l == label) {
            Some((_, rep)) => {
                assert!(
                    is_isomorphic(rep, factor, seed)?,
                    "fingerprint collision: two non-isomorphic factors share label {label}"
                );
            }
            None => simples.push((label.clone(), factor.clone())),
        }
        labels.push(label);
    }
    simples.sort_by(|a, b| a.0.cmp(&b.0));
    let mut multiset = FactorMultiset::new();
    for label in &labels {
        multiset.insert(label.clone(), 1);
    }
    Ok(ChopResult {
        series: CompositionSeries {
            filtration,
            factors,
            labels,
        },
        multiset,
        simples,
    })
}

/// Series steps relative to `cur`: cumulative bases and factors.
fn chop_rec(cur: &GModule, seed: u64) -> Result<Vec<(FqMatrix, GModule)>> {
    if cur.dim() == 0 {
        return Ok(Vec::new());
    }
    match find_proper_submodule(cur, seed)? {
        None => {
            let end = end_space(cur, seed)?;
            if end.len() > 1 {
                return Err(ModrepError::FieldTooSmall {
                    q: cur.field().q(),
                    dim: cur.dim(),
                    end_dim: end.len(),
                });
            }
            Ok(vec![(FqMatrix::identity(cur.field(), cur.dim())?, cur.clone())])
        }
        Some(w) => {
            let sub = cur.submodule(&w)?;
            let (quo, comp) = cur.quotient(&w)?;
            let mut out = Vec::new();
            for (basis, factor) in chop_rec(&sub, seed)? {
                out.push((basis.multiply(&w)?, factor));
            }
            for (basis, factor) in chop_rec(&quo, seed)? {
                let lifted = basis.multiply(&comp)?;
                out.push((w.vstack(&lifted)?, factor));
            }
            Ok(out)
        }
    }
}

/// One meataxe round: a proper submodule basis, or `None` certifying
/// irreducibility.
fn find_proper_submodule(m: &GModule, seed: u64) -> Result<Option<FqMatrix>> {
    let n = m.dim();
    let field = m.field();
    if n == 1 {
        return Ok(None);
    }
    let fwd: Vec<&FqMatrix> = (0..m.generator_count())
        .map(|j| m.generator_action(j))
        .collect();
    let bwd_owned: Vec<FqMatrix> = fwd.iter().map(|g| g.transpose()).collect();
    let bwd: Vec<&FqMatrix> = bwd_owned.iter().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x4348_4f50 ^ ((n as u64) << 20));
    for attempt in 0..MEATAXE_ATTEMPTS {
        let z = random_algebra_element(m, attempt, &mut rng)?;
        let mp = poly::minpoly(&z)?;
        for (p, _) in poly::factor(field, &mp)? {
            let degree = p.len() - 1;
            let pz = poly::eval_matrix(field, &p, &z)?;
            let kernel = pz.transpose().nullspace();
            let nullity = kernel.nrows();
            assert!(nullity >= degree, "factor of the minimal polynomial has a kernel");
            if nullity == degree {
                let sub = spin_closure(field, n, &fwd, &[&kernel.row(0)[..]], false)?;
                if !sub.is_full() {
                    return Ok(Some(sub.basis_matrix(field)?));
                }
                let co_kernel = pz.nullspace();
                let dual_sub = spin_closure(field, n, &bwd, &[&co_kernel.row(0)[..]], false)?;
                if dual_sub.is_full() {
                    return Ok(None);
                }
                let perp = dual_sub.basis_matrix(field)?.nullspace();
                assert!(perp.nrows() > 0 && perp.nrows() < n);
                return Ok(Some(perp));
            }
            for r in 0..nullity.min(NULLITY_SPIN_BOUND) {
                let sub = spin_closure(field, n, &fwd, &[&kernel.row(r)[..]], false)?;
                if !sub.is_full() {
                    return Ok(Some(sub.basis_matrix(field)?));
                }
            }
        }
    }
    Err(ModrepError::CapExceeded {
        op: "chop",
        detail: format!("no decisive split after {MEATAXE_ATTEMPTS} attempts at dimension {n}"),
    })
}

/// Seeded element of the image of the group algebra: a short sum of
/// word images with nonzero coefficients.
fn random_algebra_element(
    m: &GModule,
    attempt: usize,
    rng: &mut ChaCha12Rng,
) -> Result<FqMatrix> {
    let field = m.field();
    let ngens = m.generator_count() as u32;
    let terms = 1 + attempt % 3;
    let mut z = FqMatrix::zero(field, m.dim(), m.dim())?;
    for _ in 0..=terms {
        let len = rng.gen_range(1..=4usize);
        let toks = (0..len)
            .map(|_| GenTok::gen(rng.gen_range(0..ngens)))
            .collect();
        let c = rng.gen_range(1..field.q()) as u8;
        z = z.add(&m.rep_of_word(&Word(toks))?.scale(c)?)?;
    }
    Ok(z)
}

/// Canonical label of a simple module.
///
/// # Errors
///
/// Propagates matrix arithmetic failures only.
pub(crate) fn label_of(m: &GModule) -> Result<SimpleLabel> {
    let fp = fingerprint(m)?;
    let fp_dual = fingerprint(&m.dual())?;
    let dual_mark = match fp.cmp(&fp_dual) {
        std::cmp::Ordering::Equal => DualMark::SelfDual,
        std::cmp::Ordering::Less => DualMark::PairFirst,
        std::cmp::Ordering::Greater => DualMark::PairSecond,
    };
    Ok(SimpleLabel {
        dim: m.dim(),
        fingerprint: fp,
        dual_mark,
    })
}

/// Isomorphism-stable fingerprint: hash of the sorted characteristic
/// polynomials of a fixed word list, together with field and dimension.
///
/// # Errors
///
/// Propagates matrix arithmetic failures only.
pub fn fingerprint(m: &GModule) -> Result<String> {
    fingerprint_with(m, usize::MAX, b'F')
}

/// Cheap screen used before attempting hom-space work: same scheme on
/// a prefix of the word list, under a distinct hash domain.
pub(crate) fn fingerprint_screen(m: &GModule) -> Result<String> {
    fingerprint_with(m, 8, b'S')
}

fn fingerprint_with(m: &GModule, max_words: usize, domain: u8) -> Result<String> {
    let words = fingerprint_words(m.generator_count());
    let mut polys: Vec<Poly> = Vec::new();
    for w in words.iter().take(max_words) {
        polys.push(poly::charpoly(&m.rep_of_word(w)?)?);
    }
    polys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut bytes = vec![domain];
    bytes.extend_from_slice(&m.field().q().to_le_bytes());
    bytes.extend_from_slice(&(m.dim() as u64).to_le_bytes());
    for p in &polys {
        bytes.extend_from_slice(&(p.len() as u32).to_le_bytes());
        bytes.extend_from_slice(p);
        bytes.push(0xFF);
    }
    Ok(format!("{:032x}", fnv128(&bytes)))
}

/// The fixed word list: short products of generators in lexicographic
/// order, then a seeded tail of longer ones. Depends only on the
/// generator count so that equal groups give comparable fingerprints.
fn fingerprint_words(ngens: usize) -> Vec<Word> {
    let base = ngens as u64;
    let mut words = Vec::new();
    'outer: for len in 1..=3u32 {
        for v in 0..base.pow(len) {
            let mut toks = Vec::with_capacity(len as usize);
            let mut x = v;
            for _ in 0..len {
                toks.push(GenTok::gen((x % base) as u32));
                x /= base;
            }
            words.push(Word(toks));
            if words.len() == FINGERPRINT_SHORT_WORDS {
                break 'outer;
            }
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(FINGERPRINT_SEED);
    for _ in 0..FINGERPRINT_RANDOM_WORDS {
        let toks = (0..5)
            .map(|_| GenTok::gen(rng.gen_range(0..ngens as u32)))
            .collect();
        words.push(Word(toks));
    }
    words
}

/// 128-bit FNV-1a.
fn fnv128(bytes: &[u8]) -> u128 {
    const PRIME: u128 = 0x0000_0000_0100_0000_0000_0000_0000_013B;
    let mut hash: u128 = 0x6c62_272e_07bb_0142_62b8_2175_6295_c58d;
    for &b in bytes {
        hash ^= u128::from(b);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_list_is_deterministic_and_bounded() {
        let a = fingerprint_words(2);
        let b = fingerprint_words(2);
        assert_eq!(a.len(), b.len());
        assert!(a.len() <= FINGERPRINT_SHORT_WORDS + FINGERPRINT_RANDOM_WORDS);
        assert!(a.iter().zip(&b).all(|(x, y)| x.0 == y.0));
        // Single generator: the short section is its three powers.
        let c = fingerprint_words(1);
        assert_eq!(c.len(), 3 + FINGERPRINT_RANDOM_WORDS);
    }

    #[test]
    fn fnv128_matches_reference_values() {
        // Offset basis for the empty input, standard test vector for "a".
        assert_eq!(fnv128(b""), 0x6c62_272e_07bb_0142_62b8_2175_6295_c58d);
        assert_ne!(fnv128(b"a"), fnv128(b"b"));
    }
}
