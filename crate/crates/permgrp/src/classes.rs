//! Conjugacy classes of small groups by exhaustive orbit computation.
//!
//! # Determinism
//!
//! Classes are discovered in the order of [`PermGroup::enumerate`] (the
//! identity class always comes first) and each class orbit is a BFS under
//! conjugation by the group generators, so representatives and sizes are
//! reproducible.

use std::collections::HashMap;

use crate::{Perm, PermGroup, Result};

/// The conjugacy classes of a group, with an element-to-class lookup.
pub struct ConjugacyClasses {
    reps: Vec<Perm>,
    sizes: Vec<usize>,
    class_of: HashMap<Perm, usize>,
}

impl ConjugacyClasses {
    /// Computes all conjugacy classes of `g`.
    ///
    /// # Errors
    ///
    /// [`crate::PermError::TooLarge`] when `g` exceeds the enumeration cap.
    pub fn compute(g: &PermGroup) -> Result<Self> {
        let elems = g.enumerate()?;
        let gens = g.generators();
        let inv_gens: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut class_of: HashMap<Perm, usize> = HashMap::with_capacity(elems.len());
        for x in elems {
            if class_of.contains_key(x) {
                continue;
            }
            let id = reps.len();
            reps.push(x.clone());
            let mut orbit = vec![x.clone()];
            class_of.insert(x.clone(), id);
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head].clone();
                head += 1;
                for (gen, ginv) in gens.iter().zip(&inv_gens) {
                    let z = ginv.mul(&y).mul(gen);
                    if !class_of.contains_key(&z) {
                        class_of.insert(z.clone(), id);
                        orbit.push(z);
                    }
                }
            }
            sizes.push(orbit.len());
        }
        debug_assert_eq!(sizes.iter().sum::<usize>(), elems.len());
        Ok(Self {
            reps,
            sizes,
            class_of,
        })
    }

    /// Number of classes.
    #[must_use]
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representative of class `i` (the first element found in
    /// enumeration order; class 0 is the identity class).
    #[must_use]
    pub fn rep(&self, i: usize) -> &Perm {
        &self.reps[i]
    }

    #[must_use]
    pub fn reps(&self) -> &[Perm] {
        &self.reps
    }

    /// Size of class `i`.
    #[must_use]
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    /// Class index of an element, or `None` for non-members.
    #[must_use]
    pub fn class_of(&self, x: &Perm) -> Option<usize> {
        self.class_of.get(x).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_has_seven_classes_of_known_sizes() {
        let a = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let g = PermGroup::new(5, vec![a, b]).unwrap();
        let cc = ConjugacyClasses::compute(&g).unwrap();
        // Classes of S5 match the partitions of 5.
        assert_eq!(cc.len(), 7);
        let mut sizes: Vec<usize> = (0..cc.len()).map(|i| cc.size(i)).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 10, 15, 20, 20, 24, 30]);
        assert_eq!(cc.class_of(&Perm::identity(5)), Some(0));
        assert!(cc.rep(0).is_identity());
    }

    #[test]
    fn class_lookup_consistent_with_conjugation() {
        let a = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let g = PermGroup::new(4, vec![a.clone(), b.clone()]).unwrap();
        let cc = ConjugacyClasses::compute(&g).unwrap();
        assert_eq!(cc.len(), 5);
        for x in g.enumerate().unwrap() {
            let cx = cc.class_of(x).unwrap();
            assert_eq!(cc.class_of(&x.conjugate_by(&b)), Some(cx));
        }
    }
}
