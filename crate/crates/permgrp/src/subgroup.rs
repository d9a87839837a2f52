//! Subgroups and the brute-force subgroup operations.
//!
//! # Representation
//!
//! A [`Subgroup`] keeps a handle on its parent group, its own generator
//! list, optional generator words over the parent's generators, and a
//! private [`PermGroup`] built from its generators so that order,
//! membership and enumeration are available without recomputation.
//!
//! Centralizers, normalizers, Sylow 2-subgroups and subgroup-conjugacy
//! tests all work by exhaustive enumeration of the ambient group (never
//! backtrack search) and are guarded by the enumeration cap.

use std::collections::HashSet;
use std::sync::Arc;

use crate::{Perm, PermError, PermGroup, Result, Word};

/// A subgroup of a [`PermGroup`], closed under the recorded generators.
pub struct Subgroup {
    parent: Arc<PermGroup>,
    gens: Vec<Perm>,
    words: Option<Vec<Word>>,
    group: Arc<PermGroup>,
}

impl Subgroup {
    /// Builds a subgroup from generators, verifying each lies in the
    /// parent.
    ///
    /// # Errors
    ///
    /// [`PermError::BadSubgroupGenerator`] if a generator fails the
    /// parent's membership test (or has the wrong degree).
    pub fn new(parent: Arc<PermGroup>, gens: Vec<Perm>) -> Result<Self> {
        for (index, g) in gens.iter().enumerate() {
            let ok = g.degree() == parent.degree() && parent.contains(g)?;
            if !ok {
                return Err(PermError::BadSubgroupGenerator { index });
            }
        }
        let group = Arc::new(PermGroup::new(parent.degree(), gens.clone())?);
        Ok(Self {
            parent,
            gens,
            words: None,
            group,
        })
    }

    /// Builds a subgroup whose generators come with words over the
    /// parent's generators, verifying that each word evaluates to its
    /// generator.
    ///
    /// # Errors
    ///
    /// [`PermError::BadGeneratorWord`] when a word does not evaluate to
    /// the matching generator, plus the checks of [`Subgroup::new`].
    pub fn with_words(parent: Arc<PermGroup>, gens: Vec<Perm>, words: Vec<Word>) -> Result<Self> {
        if words.len() != gens.len() {
            return Err(PermError::BadGeneratorWord { index: words.len() });
        }
        for (index, (g, w)) in gens.iter().zip(&words).enumerate() {
            match parent.evaluate_word(w) {
                Ok(p) if p == *g => {}
                _ => return Err(PermError::BadGeneratorWord { index }),
            }
        }
        let mut sub = Self::new(parent, gens)?;
        sub.words = Some(words);
        Ok(sub)
    }

    /// Builds a subgroup directly from words over the parent's generators.
    ///
    /// # Errors
    ///
    /// [`PermError::BadGeneratorWord`] for words with out-of-range tokens.
    pub fn from_words(parent: Arc<PermGroup>, words: Vec<Word>) -> Result<Self> {
        let mut gens = Vec::with_capacity(words.len());
        for (index, w) in words.iter().enumerate() {
            let g = parent
                .evaluate_word(w)
                .map_err(|_| PermError::BadGeneratorWord { index })?;
            gens.push(g);
        }
        Self::with_words(parent, gens, words)
    }

    /// The trivial subgroup of `parent`.
    #[must_use]
    pub fn trivial(parent: Arc<PermGroup>) -> Self {
        let group = Arc::new(PermGroup::trivial(parent.degree()));
        Self {
            parent,
            gens: Vec::new(),
            words: Some(Vec::new()),
            group,
        }
    }

    #[must_use]
    pub fn parent(&self) -> &Arc<PermGroup> {
        &self.parent
    }

    #[must_use]
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// The subgroup as a free-standing group.
    #[must_use]
    pub fn as_group(&self) -> &PermGroup {
        &self.group
    }

    /// Shared handle on the free-standing group, so that modules
    /// restricted to the same [`Subgroup`] value agree on group identity.
    #[must_use]
    pub fn as_group_arc(&self) -> Arc<PermGroup> {
        Arc::clone(&self.group)
    }

    #[must_use]
    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Membership in the subgroup itself.
    ///
    /// # Errors
    ///
    /// Degree mismatch.
    pub fn contains(&self, x: &Perm) -> Result<bool> {
        self.group.contains(x)
    }

    /// All subgroup elements (cached, deterministic order).
    ///
    /// # Errors
    ///
    /// [`PermError::TooLarge`] over the enumeration cap.
    pub fn elements(&self) -> Result<&[Perm]> {
        self.group.enumerate()
    }

    /// Words expressing the generators over the parent's generators:
    /// stored words when present, otherwise factored through the parent's
    /// stabilizer chain.
    ///
    /// # Errors
    ///
    /// Propagates [`PermGroup::factor_word`] failures.
    pub fn generator_words(&self) -> Result<Vec<Word>> {
        if let Some(w) = &self.words {
            return Ok(w.clone());
        }
        self.gens.iter().map(|g| self.parent.factor_word(g)).collect()
    }

    /// True iff every generator is an involution (or trivial) and the
    /// generators commute pairwise, i.e. the subgroup is elementary
    /// abelian of exponent dividing 2.
    #[must_use]
    pub fn is_elementary_abelian_2(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            if !a.mul(a).is_identity() {
                return false;
            }
            for b in &self.gens[..i] {
                if a.mul(b) != b.mul(a) {
                    return false;
                }
            }
        }
        true
    }

    /// The conjugate subgroup `x⁻¹ S x` (generator words are dropped).
    ///
    /// # Errors
    ///
    /// Degree mismatch via the underlying group construction.
    pub fn conjugate_by(&self, x: &Perm) -> Result<Self> {
        let gens: Vec<Perm> = self.gens.iter().map(|g| g.conjugate_by(x)).collect();
        let group = Arc::new(PermGroup::new(self.parent.degree(), gens.clone())?);
        Ok(Self {
            parent: Arc::clone(&self.parent),
            gens,
            words: None,
            group,
        })
    }
}

impl PermGroup {
    /// Centralizer of `s` in `g`: all elements commuting with every
    /// generator of `s`, found by brute force over `enumerate(g)` and
    /// reduced to a small generating set.
    ///
    /// # Errors
    ///
    /// [`PermError::TooLarge`] when `g` exceeds the enumeration cap;
    /// degree mismatch between `g` and `s`.
    pub fn centralizer(g: &Arc<PermGroup>, s: &Subgroup) -> Result<Subgroup> {
        if g.degree() != s.parent().degree() {
            return Err(PermError::DegreeMismatch(g.degree(), s.parent().degree()));
        }
        let elems = g.enumerate()?;
        let hits: Vec<Perm> = elems
            .iter()
            .filter(|x| s.generators().iter().all(|t| x.mul(t) == t.mul(x)))
            .cloned()
            .collect();
        subgroup_from_elements(g, &hits)
    }

    /// Normalizer of `s` in `g`: all elements conjugating the element set
    /// of `s` to itself, found by brute force over `enumerate(g)`.
    ///
    /// # Errors
    ///
    /// [`PermError::TooLarge`] when `g` or `s` exceeds the enumeration
    /// cap; degree mismatch between `g` and `s`.
    pub fn normalizer(g: &Arc<PermGroup>, s: &Subgroup) -> Result<Subgroup> {
        if g.degree() != s.parent().degree() {
            return Err(PermError::DegreeMismatch(g.degree(), s.parent().degree()));
        }
        let sset: HashSet<&Perm> = s.elements()?.iter().collect();
        let elems = g.enumerate()?;
        // Conjugating every generator into the (finite) subgroup already
        // forces s^x = s, since s^x then sits inside s with equal order.
        let hits: Vec<Perm> = elems
            .iter()
            .filter(|x| {
                s.generators()
                    .iter()
                    .all(|t| sset.contains(&t.conjugate_by(x)))
            })
            .cloned()
            .collect();
        subgroup_from_elements(g, &hits)
    }

    /// A Sylow 2-subgroup of `g`, built by repeatedly extending a
    /// 2-subgroup S by a normalizing 2-element: while |S| is short of the
    /// 2-part of |g|, the quotient N_g(S)/S has even order, so N_g(S)
    /// contains a 2-element z outside S, and ⟨S, z⟩ is again a 2-group
    /// because S is normal in it of 2-power index.
    ///
    /// # Errors
    ///
    /// [`PermError::TooLarge`] when `g` exceeds the enumeration cap.
    pub fn sylow2(g: &Arc<PermGroup>) -> Result<Subgroup> {
        let two_part = {
            let mut n = g.order();
            let mut t = 1u64;
            while n % 2 == 0 {
                n /= 2;
                t *= 2;
            }
            t
        };
        let mut sub = Subgroup::trivial(Arc::clone(g));
        if two_part == 1 {
            return Ok(sub);
        }
        while sub.order() < two_part {
            let n = PermGroup::normalizer(g, &sub)?;
            let selems: HashSet<&Perm> = sub.elements()?.iter().collect();
            let mut extended = false;
            for x in n.elements()? {
                let ord = x.order();
                let odd = {
                    let mut m = ord;
                    while m % 2 == 0 {
                        m /= 2;
                    }
                    m
                };
                let z = x.pow(odd as i64);
                if !z.is_identity() && !selems.contains(&z) {
                    let mut gens = sub.generators().to_vec();
                    gens.push(z);
                    sub = Subgroup::new(Arc::clone(g), gens)?;
                    extended = true;
                    break;
                }
            }
            assert!(
                extended,
                "a proper 2-subgroup always extends inside its normalizer"
            );
        }
        Ok(sub)
    }

    /// Whether `a` and `b` are conjugate subgroups of `g`, by brute force
    /// over `enumerate(g)`.
    ///
    /// # Errors
    ///
    /// [`PermError::TooLarge`] when any of the three groups exceeds the
    /// enumeration cap.
    pub fn are_conjugate_subgroups(g: &PermGroup, a: &Subgroup, b: &Subgroup) -> Result<bool> {
        if a.order() != b.order() {
            return Ok(false);
        }
        let bset: HashSet<&Perm> = b.elements()?.iter().collect();
        for x in g.enumerate()? {
            if a.generators()
                .iter()
                .all(|t| bset.contains(&t.conjugate_by(x)))
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Wraps an element list (a subgroup of `g`, identity included) as a
/// [`Subgroup`] with a greedily reduced generating set.
fn subgroup_from_elements(g: &Arc<PermGroup>, elems: &[Perm]) -> Result<Subgroup> {
    let want = elems.len();
    let degree = g.degree();
    let mut gens: Vec<Perm> = Vec::new();
    let mut closure: HashSet<Perm> = HashSet::new();
    closure.insert(Perm::identity(degree));
    for x in elems {
        if closure.contains(x) {
            continue;
        }
        gens.push(x.clone());
        closure = close_under(degree, &gens);
        if closure.len() == want {
            break;
        }
    }
    debug_assert_eq!(closure.len(), want, "element list is a subgroup");
    Subgroup::new(Arc::clone(g), gens)
}

fn close_under(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
    let mut seen = HashSet::new();
    let id = Perm::identity(degree);
    let mut queue = vec![id.clone()];
    seen.insert(id);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> Arc<PermGroup> {
        let a = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        Arc::new(PermGroup::new(5, vec![a, b]).unwrap())
    }

    #[test]
    fn centralizer_of_trivial_is_whole_group() {
        let g = s5();
        let t = Subgroup::trivial(Arc::clone(&g));
        let c = PermGroup::centralizer(&g, &t).unwrap();
        assert_eq!(c.order(), 120);
    }

    #[test]
    fn normalizer_of_transposition_in_s5() {
        let g = s5();
        let t = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![0, 1]]).unwrap()],
        )
        .unwrap();
        let n = PermGroup::normalizer(&g, &t).unwrap();
        // N = <(0 1)> x Sym{2,3,4}, order 2 * 6 = 12.
        assert_eq!(n.order(), 12);
        let c = PermGroup::centralizer(&g, &t).unwrap();
        assert_eq!(c.order(), 12, "centralizer = normalizer here");
        for x in c.elements().unwrap() {
            assert!(n.contains(x).unwrap());
        }
    }

    #[test]
    fn sylow2_orders() {
        let s3 = {
            let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
            let b = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
            Arc::new(PermGroup::new(3, vec![a, b]).unwrap())
        };
        assert_eq!(PermGroup::sylow2(&s3).unwrap().order(), 2);
        let g = s5();
        let syl = PermGroup::sylow2(&g).unwrap();
        assert_eq!(syl.order(), 8);
        assert!(!syl.is_elementary_abelian_2(), "D8 is not elementary abelian");
    }

    #[test]
    fn elementary_abelian_detection() {
        let g = s5();
        let klein = Subgroup::new(
            Arc::clone(&g),
            vec![
                Perm::from_cycles(5, &[vec![0, 1], vec![2, 3]]).unwrap(),
                Perm::from_cycles(5, &[vec![0, 2], vec![1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(klein.is_elementary_abelian_2());
        assert_eq!(klein.order(), 4);
        let c4 = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![0, 1, 2, 3]]).unwrap()],
        )
        .unwrap();
        assert!(!c4.is_elementary_abelian_2());
        assert!(Subgroup::trivial(Arc::clone(&g)).is_elementary_abelian_2());
    }

    #[test]
    fn conjugate_subgroups_detected() {
        let g = s5();
        let a = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![0, 1]]).unwrap()],
        )
        .unwrap();
        let b = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![3, 4]]).unwrap()],
        )
        .unwrap();
        assert!(PermGroup::are_conjugate_subgroups(&g, &a, &b).unwrap());
        let c = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap()],
        )
        .unwrap();
        assert!(!PermGroup::are_conjugate_subgroups(&g, &a, &c).unwrap());
    }

    #[test]
    fn words_validate_and_evaluate() {
        let g = s5();
        let w = Word::parse("g0 g1").unwrap();
        let target = g.generators()[0].mul(&g.generators()[1]);
        let sub = Subgroup::from_words(Arc::clone(&g), vec![w]).unwrap();
        assert_eq!(sub.generators()[0], target);
        let bad = Word::parse("g7").unwrap();
        assert!(matches!(
            Subgroup::from_words(Arc::clone(&g), vec![bad]),
            Err(PermError::BadGeneratorWord { index: 0 })
        ));
        // Computed words evaluate back to the generators.
        let sub2 = Subgroup::new(
            Arc::clone(&g),
            vec![Perm::from_cycles(5, &[vec![0, 1], vec![2, 4]]).unwrap()],
        )
        .unwrap();
        for (gen, w) in sub2.generators().iter().zip(sub2.generator_words().unwrap()) {
            assert_eq!(&g.evaluate_word(&w).unwrap(), gen);
        }
    }
}
