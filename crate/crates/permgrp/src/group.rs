//! Permutation groups backed by stabilizer chains.
//!
//! # Determinism
//!
//! Chain construction runs a randomized Schreier–Sims pass from a fixed
//! seed followed by a deterministic verification pass that checks every
//! Schreier generator sifts to the identity; the verified chain therefore
//! yields exact orders and exact membership. All data structures are
//! iterated in insertion order, so the chain (and every word this module
//! returns) is a pure function of the generator list.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::word::GenTok;
use crate::{Perm, PermError, Result, Word};

/// Default cap for exhaustive element enumeration.
pub const ENUMERATION_CAP: u64 = 200_000;

/// Default bound on the token length of factored words.
pub const WORD_LENGTH_BOUND: usize = 1 << 16;

/// A permutation group given by generators, with a lazily built and
/// verified stabilizer chain.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<StabChain>,
    elements: OnceLock<Vec<Perm>>,
}

struct SGen {
    perm: Perm,
    word: Word,
    /// Length of the base prefix this generator fixes pointwise; the
    /// generator is active at levels `0..=level`.
    level: usize,
}

struct Level {
    point: u32,
    /// Fundamental orbit in BFS discovery order; `orbit[0] == point`.
    orbit: Vec<u32>,
    /// `point -> (parent point, sgen id)` BFS tree edges (root absent).
    tree: HashMap<u32, (u32, usize)>,
    /// Eager transversal permutations and their inverses.
    reps: HashMap<u32, (Perm, Perm)>,
}

struct StabChain {
    base: Vec<u32>,
    sgens: Vec<SGen>,
    levels: Vec<Level>,
    order: u64,
}

impl PermGroup {
    /// Builds a group from generators of the stated degree.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::DegreeMismatch`] if a generator has the wrong
    /// degree.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(Self {
            degree,
            gens,
            chain: OnceLock::new(),
            elements: OnceLock::new(),
        })
    }

    /// The trivial group on `degree` points.
    #[must_use]
    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators to mismatch")
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[must_use]
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::build(self.degree, &self.gens))
    }

    /// Exact group order (product of fundamental orbit sizes of the
    /// verified stabilizer chain).
    #[must_use]
    pub fn order(&self) -> u64 {
        self.chain().order
    }

    /// Exact membership test by sifting through the stabilizer chain.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::DegreeMismatch`] on degree mismatch.
    pub fn contains(&self, x: &Perm) -> Result<bool> {
        if x.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, x.degree()));
        }
        Ok(self.chain().sift_perm(x).is_identity())
    }

    /// Factors a member as a word in the original generators (chain-sift
    /// transversal words, unoptimized apart from free reduction), with the
    /// default length bound.
    ///
    /// # Errors
    ///
    /// [`PermError::NotMember`] if `x` is outside the group,
    /// [`PermError::WordTooLong`] past the bound, plus degree mismatch.
    pub fn factor_word(&self, x: &Perm) -> Result<Word> {
        self.factor_word_bounded(x, WORD_LENGTH_BOUND)
    }

    /// [`PermGroup::factor_word`] with an explicit length bound.
    ///
    /// # Errors
    ///
    /// As for [`PermGroup::factor_word`].
    pub fn factor_word_bounded(&self, x: &Perm, bound: usize) -> Result<Word> {
        if x.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, x.degree()));
        }
        if x.is_identity() {
            return Ok(Word::empty());
        }
        // A generator factors as itself.
        if let Some(i) = self.gens.iter().position(|g| g == x) {
            return Ok(Word::single(i as u32));
        }
        let word = self.chain().factor(x)?;
        if word.len() > bound {
            return Err(PermError::WordTooLong(bound));
        }
        Ok(word)
    }

    /// Evaluates a word in this group's generators.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::NotMember`] for out-of-range tokens.
    pub fn evaluate_word(&self, w: &Word) -> Result<Perm> {
        w.evaluate(&self.gens, self.degree)
    }

    /// All elements, each exactly once, in a deterministic BFS order
    /// starting at the identity. The result is cached.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::TooLarge`] when the order exceeds
    /// [`ENUMERATION_CAP`].
    pub fn enumerate(&self) -> Result<&[Perm]> {
        let order = self.order();
        if order > ENUMERATION_CAP {
            return Err(PermError::TooLarge {
                order,
                cap: ENUMERATION_CAP,
            });
        }
        Ok(self.elements.get_or_init(|| {
            let mut seen: HashMap<Perm, ()> = HashMap::with_capacity(order as usize);
            let id = Perm::identity(self.degree);
            let mut queue = vec![id.clone()];
            seen.insert(id, ());
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head].clone();
                head += 1;
                for g in &self.gens {
                    let y = x.mul(g);
                    if !seen.contains_key(&y) {
                        seen.insert(y.clone(), ());
                        queue.push(y);
                    }
                }
            }
            debug_assert_eq!(queue.len() as u64, order, "enumeration matches chain order");
            queue
        }))
    }

    /// The base points of the verified stabilizer chain.
    #[must_use]
    pub fn base(&self) -> Vec<u32> {
        self.chain().base.clone()
    }

    /// Sizes of the fundamental orbits along the chain; their product is
    /// the group order. Together with [`PermGroup::base`] this certifies
    /// transitivity properties (e.g. sharp multiple transitivity).
    #[must_use]
    pub fn fundamental_orbit_lengths(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.orbit.len()).collect()
    }
}

impl StabChain {
    fn build(degree: usize, gens: &[Perm]) -> StabChain {
        let mut b = Builder {
            degree,
            base: Vec::new(),
            sgens: Vec::new(),
            levels: Vec::new(),
        };
        for (i, g) in gens.iter().enumerate() {
            if !g.is_identity() {
                b.push_sgen(g.clone(), Word::single(i as u32));
            }
        }
        b.rebuild_all();

        // Randomized pass: sift random words until the chain looks stable.
        let mut rng = ChaCha12Rng::seed_from_u64(0x5349_4654_u64 ^ (degree as u64) << 8);
        let mut streak = 0;
        while streak < 24 && !gens.is_empty() {
            let len = rng.gen_range(8..48);
            let toks: Vec<GenTok> = (0..len)
                .map(|_| GenTok {
                    idx: rng.gen_range(0..gens.len() as u32),
                    inv: rng.gen_bool(0.5),
                })
                .collect();
            let word = reduce_word(Word(toks));
            let perm = word
                .evaluate(gens, degree)
                .expect("tokens index the generator list");
            let (residue, rword) = b.sift_with_word(0, perm, word);
            if residue.is_identity() {
                streak += 1;
            } else {
                streak = 0;
                b.push_sgen(residue, rword);
                b.rebuild_all();
            }
        }

        // Deterministic verification: every Schreier generator must sift to
        // the identity; failures become new strong generators.
        while let Some((perm, word)) = b.find_schreier_failure() {
            b.push_sgen(perm, word);
            b.rebuild_all();
        }

        let order = b
            .levels
            .iter()
            .map(|l| l.orbit.len() as u64)
            .product::<u64>();
        StabChain {
            base: b.base,
            sgens: b.sgens,
            levels: b.levels,
            order,
        }
    }

    /// Sifts a permutation; the residue is the identity iff it is a member.
    fn sift_perm(&self, x: &Perm) -> Perm {
        let mut g = x.clone();
        for level in &self.levels {
            let p = g.apply(level.point);
            match level.reps.get(&p) {
                None => return g,
                Some((_, uinv)) => g = g.mul(uinv),
            }
        }
        g
    }

    /// Factors a member as the product of transversal representatives
    /// discovered while sifting (deepest level first).
    fn factor(&self, x: &Perm) -> Result<Word> {
        let mut g = x.clone();
        let mut picked: Vec<(usize, u32)> = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            let p = g.apply(level.point);
            match level.reps.get(&p) {
                None => return Err(PermError::NotMember),
                Some((_, uinv)) => {
                    picked.push((i, p));
                    g = g.mul(uinv);
                }
            }
        }
        if !g.is_identity() {
            return Err(PermError::NotMember);
        }
        // x = u_m ... u_1 with u_i the representative picked at level i.
        let mut word = Word::empty();
        for &(i, p) in picked.iter().rev() {
            word = word.concat(&self.rep_word(i, p));
        }
        Ok(reduce_word(word))
    }

    fn rep_word(&self, level: usize, point: u32) -> Word {
        rep_word_in(&self.levels[level], &self.sgens, point)
    }
}

/// Mutable chain state during construction.
struct Builder {
    degree: usize,
    base: Vec<u32>,
    sgens: Vec<SGen>,
    levels: Vec<Level>,
}

impl Builder {
    /// Adds a strong generator, extending the base when the new generator
    /// fixes every existing base point.
    fn push_sgen(&mut self, perm: Perm, word: Word) {
        debug_assert!(!perm.is_identity());
        while fixed_prefix(&perm, &self.base) == self.base.len() {
            // Pick the next base point greedily: the moved point lying in
            // the largest orbit of the generators active at the new level.
            let candidates = self.choose_base_point(&perm);
            self.base.push(candidates);
        }
        let level = fixed_prefix(&perm, &self.base);
        self.sgens.push(SGen { perm, word, level });
        // Base growth can deepen the level of existing generators.
        let base = &self.base;
        for sg in &mut self.sgens {
            sg.level = fixed_prefix(&sg.perm, base);
        }
    }

    /// Largest-orbit heuristic for the next base point: consider the
    /// generators that fix the whole current base (they will be active at
    /// the new level; `extra` is about to join them) and pick the moved
    /// point with the largest orbit, smallest point on ties.
    fn choose_base_point(&self, extra: &Perm) -> u32 {
        let blen = self.base.len();
        let mut active: Vec<&Perm> = self
            .sgens
            .iter()
            .filter(|s| s.level >= blen)
            .map(|s| &s.perm)
            .collect();
        active.push(extra);
        let mut orbit_id = vec![usize::MAX; self.degree];
        let mut sizes: Vec<usize> = Vec::new();
        for start in 0..self.degree {
            if orbit_id[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut queue = vec![start as u32];
            orbit_id[start] = id;
            let mut head = 0;
            while head < queue.len() {
                let p = queue[head];
                head += 1;
                for g in &active {
                    let q = g.apply(p);
                    if orbit_id[q as usize] == usize::MAX {
                        orbit_id[q as usize] = id;
                        queue.push(q);
                    }
                }
            }
            sizes.push(queue.len());
        }
        let mut best: Option<(usize, u32)> = None;
        for p in 0..self.degree as u32 {
            if active.iter().all(|g| g.apply(p) == p) {
                continue;
            }
            let size = sizes[orbit_id[p as usize]];
            match best {
                Some((bs, _)) if bs >= size => {}
                _ => best = Some((size, p)),
            }
        }
        best.expect("a non-identity permutation moves some point").1
    }

    /// Recomputes every level's orbit, tree and transversal from the
    /// current strong generators.
    fn rebuild_all(&mut self) {
        self.levels.clear();
        for (i, &point) in self.base.iter().enumerate() {
            let gen_ids: Vec<usize> = self
                .sgens
                .iter()
                .enumerate()
                .filter(|(_, s)| s.level >= i)
                .map(|(id, _)| id)
                .collect();
            let mut level = Level {
                point,
                orbit: vec![point],
                tree: HashMap::new(),
                reps: HashMap::new(),
            };
            level
                .reps
                .insert(point, (Perm::identity(self.degree), Perm::identity(self.degree)));
            let mut head = 0;
            while head < level.orbit.len() {
                let p = level.orbit[head];
                head += 1;
                for &gid in &gen_ids {
                    let q = self.sgens[gid].perm.apply(p);
                    if !level.reps.contains_key(&q) {
                        let rep = level.reps[&p].0.mul(&self.sgens[gid].perm);
                        let repinv = rep.inverse();
                        level.reps.insert(q, (rep, repinv));
                        level.tree.insert(q, (p, gid));
                        level.orbit.push(q);
                    }
                }
            }
            self.levels.push(level);
        }
    }

    /// Sifts starting at `start`, tracking the word (the input word must
    /// evaluate to the input permutation).
    fn sift_with_word(&self, start: usize, x: Perm, xword: Word) -> (Perm, Word) {
        let mut g = x;
        let mut w = xword;
        for level in &self.levels[start..] {
            let p = g.apply(level.point);
            match level.reps.get(&p) {
                None => return (g, w),
                Some((_, uinv)) => {
                    g = g.mul(uinv);
                    w = reduce_word(w.concat(&rep_word_in(level, &self.sgens, p).inverse()));
                }
            }
        }
        (g, w)
    }

    /// Deterministic verification sweep, deepest level first: returns a
    /// non-sifting Schreier generator residue, or `None` when the chain is
    /// complete (which certifies the order by Schreier's lemma).
    fn find_schreier_failure(&self) -> Option<(Perm, Word)> {
        for i in (0..self.levels.len()).rev() {
            let level = &self.levels[i];
            let gen_ids: Vec<usize> = self
                .sgens
                .iter()
                .enumerate()
                .filter(|(_, s)| s.level >= i)
                .map(|(id, _)| id)
                .collect();
            for &p in &level.orbit {
                let (up, _) = &level.reps[&p];
                for &gid in &gen_ids {
                    let s = &self.sgens[gid];
                    let q = s.perm.apply(p);
                    let Some((_, uq_inv)) = level.reps.get(&q) else {
                        // The orbit is closed under active generators, so
                        // this cannot happen after rebuild_all.
                        unreachable!("orbit closed under active generators");
                    };
                    let schreier = up.mul(&s.perm).mul(uq_inv);
                    if schreier.is_identity() {
                        continue;
                    }
                    let word = rep_word_in(level, &self.sgens, p)
                        .concat(&s.word)
                        .concat(&rep_word_in(level, &self.sgens, q).inverse());
                    let (residue, rword) =
                        self.sift_with_word(i + 1, schreier, reduce_word(word));
                    if !residue.is_identity() {
                        return Some((residue, rword));
                    }
                }
            }
        }
        None
    }
}

/// Number of leading base points fixed by `perm`.
fn fixed_prefix(perm: &Perm, base: &[u32]) -> usize {
    base.iter()
        .take_while(|&&b| perm.apply(b) == b)
        .count()
}

/// Transversal word for `point` by walking the BFS tree.
fn rep_word_in(level: &Level, sgens: &[SGen], mut point: u32) -> Word {
    let mut parts: Vec<&Word> = Vec::new();
    while let Some(&(parent, gid)) = level.tree.get(&point) {
        parts.push(&sgens[gid].word);
        point = parent;
    }
    let mut toks = Vec::new();
    for w in parts.iter().rev() {
        toks.extend_from_slice(&w.0);
    }
    reduce_word(Word(toks))
}

/// Free reduction: cancels adjacent mutually inverse tokens.
fn reduce_word(w: Word) -> Word {
    let mut out: Vec<GenTok> = Vec::with_capacity(w.0.len());
    for tok in w.0 {
        match out.last() {
            Some(last) if last.idx == tok.idx && last.inv != tok.inv => {
                out.pop();
            }
            _ => out.push(tok),
        }
    }
    Word(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> PermGroup {
        let a = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        PermGroup::new(5, vec![a, b]).unwrap()
    }

    #[test]
    fn s5_order_and_membership() {
        let g = s5();
        assert_eq!(g.order(), 120);
        for gen in g.generators() {
            assert!(g.contains(gen).unwrap());
        }
        assert!(g.contains(&Perm::identity(5)).unwrap());
        let x = Perm::from_cycles(5, &[vec![2, 4], vec![0, 3, 1]]).unwrap();
        assert!(g.contains(&x).unwrap(), "all of S5 is inside");
    }

    #[test]
    fn a5_rejects_odd_permutations() {
        let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let g = PermGroup::new(5, vec![a, b]).unwrap();
        assert_eq!(g.order(), 60);
        let odd = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        assert!(!g.contains(&odd).unwrap());
    }

    #[test]
    fn factor_word_round_trips() {
        let g = s5();
        assert_eq!(g.factor_word(&Perm::identity(5)).unwrap(), Word::empty());
        assert_eq!(
            g.factor_word(&g.generators()[1].clone()).unwrap(),
            Word::single(1)
        );
        // Random-ish products evaluate back.
        let mut x = Perm::identity(5);
        for i in 0..20 {
            x = x.mul(&g.generators()[i % 2]);
            let w = g.factor_word(&x).unwrap();
            assert_eq!(g.evaluate_word(&w).unwrap(), x);
        }
    }

    #[test]
    fn factor_word_rejects_non_members() {
        let a = Perm::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        let g = PermGroup::new(4, vec![a]).unwrap();
        let out = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        assert!(matches!(g.factor_word(&out), Err(PermError::NotMember)));
        let wrong = Perm::identity(5);
        assert!(matches!(
            g.factor_word(&wrong),
            Err(PermError::DegreeMismatch(4, 5))
        ));
    }

    #[test]
    fn enumerate_s3_and_cap() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let g = PermGroup::new(3, vec![a, b]).unwrap();
        let elems = g.enumerate().unwrap();
        assert_eq!(elems.len(), 6);
        let set: std::collections::HashSet<_> = elems.iter().cloned().collect();
        assert_eq!(set.len(), 6, "no duplicates");
    }

    #[test]
    fn larger_group_order_s8() {
        let a = Perm::from_cycles(8, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(8, &[vec![0, 1, 2, 3, 4, 5, 6, 7]]).unwrap();
        let g = PermGroup::new(8, vec![a, b]).unwrap();
        assert_eq!(g.order(), 40320);
        assert_eq!(g.enumerate().unwrap().len(), 40320);
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::trivial(6);
        assert_eq!(g.order(), 1);
        assert_eq!(g.enumerate().unwrap().len(), 1);
        assert!(g.contains(&Perm::identity(6)).unwrap());
    }

    #[test]
    fn word_reduction_cancels() {
        let w = Word(vec![
            GenTok::gen(0),
            GenTok::gen(1),
            GenTok::inv(1),
            GenTok::inv(0),
            GenTok::gen(2),
        ]);
        assert_eq!(reduce_word(w), Word(vec![GenTok::gen(2)]));
    }
}
