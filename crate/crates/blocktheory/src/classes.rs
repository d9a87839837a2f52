//! Conjugacy classes of small groups by brute-force enumeration.
//!
//! # Method
//!
//! The group is enumerated once; classes are the orbits of the
//! conjugation action, closed under conjugation by generators. Every
//! class takes its lexicographically smallest element as
//! representative and classes are sorted by representative, which
//! puts the identity class first and makes the ordering canonical:
//! independent runs, and independently constructed equal groups,
//! number the classes identically.
//!
//! # Determinism
//!
//! No randomness anywhere; the ordering depends only on the group.

use std::collections::HashMap;
use std::sync::Arc;

use permgrp::{Perm, PermGroup};

use crate::{BlockError, Result};

/// Largest group order accepted for class enumeration.
pub const CLASS_ENUM_CAP: u64 = 1 << 17;

/// Conjugacy classes of one group: representatives, sizes, and a
/// total element-to-class lookup.
pub struct ClassData {
    group: Arc<PermGroup>,
    reps: Vec<Perm>,
    sizes: Vec<u64>,
    index_of: HashMap<Perm, u32>,
}

impl ClassData {
    /// Enumerate the group and partition it into conjugacy classes.
    ///
    /// # Errors
    ///
    /// [`BlockError::TooLarge`] above [`CLASS_ENUM_CAP`]; propagated
    /// enumeration failures.
    pub fn compute(group: &Arc<PermGroup>) -> Result<Self> {
        if group.order() > CLASS_ENUM_CAP {
            return Err(BlockError::TooLarge {
                op: "class enumeration",
                detail: format!(
                    "group order {} exceeds the enumeration cap {CLASS_ENUM_CAP}",
                    group.order()
                ),
            });
        }
        let elements = group.enumerate()?;
        let gens: Vec<Perm> = group.generators().to_vec();
        let mut index_of: HashMap<Perm, u32> = HashMap::with_capacity(elements.len());
        let mut classes: Vec<(Perm, Vec<Perm>)> = Vec::new();
        for x in elements {
            if index_of.contains_key(x) {
                continue;
            }
            // Conjugation orbit of x, breadth first over the generators.
            let id = classes.len() as u32;
            let mut orbit = vec![x.clone()];
            index_of.insert(x.clone(), id);
            let mut cursor = 0;
            while cursor < orbit.len() {
                let y = orbit[cursor].clone();
                cursor += 1;
                for g in &gens {
                    let z = y.conjugate_by(g);
                    if !index_of.contains_key(&z) {
                        index_of.insert(z.clone(), id);
                        orbit.push(z);
                    }
                }
            }
            let rep = orbit.iter().min().expect("a class is nonempty").clone();
            classes.push((rep, orbit));
        }
        // Canonical order: sort by representative and renumber. The
        // identity is the smallest permutation, so its class lands at
        // index zero.
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| classes[a].0.cmp(&classes[b].0));
        let mut reps = Vec::with_capacity(classes.len());
        let mut sizes = Vec::with_capacity(classes.len());
        for (new_id, &old) in order.iter().enumerate() {
            let (rep, orbit) = &classes[old];
            reps.push(rep.clone());
            sizes.push(orbit.len() as u64);
            for y in orbit {
                *index_of.get_mut(y).expect("orbit elements are indexed") = new_id as u32;
            }
        }
        assert!(reps[0].is_identity(), "the identity class sorts first");
        let total: u64 = sizes.iter().sum();
        assert_eq!(total, group.order(), "classes partition the group");
        Ok(ClassData {
            group: Arc::clone(group),
            reps,
            sizes,
            index_of,
        })
    }

    #[must_use]
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    /// Number of conjugacy classes.
    #[must_use]
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Canonical representative of class `i`.
    #[must_use]
    pub fn rep(&self, i: usize) -> &Perm {
        &self.reps[i]
    }

    #[must_use]
    pub fn size(&self, i: usize) -> u64 {
        self.sizes[i]
    }

    /// Class index of an element, or `None` outside the group.
    #[must_use]
    pub fn class_of(&self, x: &Perm) -> Option<u32> {
        self.index_of.get(x).copied()
    }

    /// Whether class `i` consists of odd-order (2-regular) elements.
    #[must_use]
    pub fn is_2_regular(&self, i: usize) -> bool {
        self.reps[i].order() % 2 == 1
    }

    /// Number of 2-regular classes: the number of irreducible Brauer
    /// characters of the group algebra in characteristic 2 over a
    /// splitting field.
    #[must_use]
    pub fn num_2_regular(&self) -> usize {
        (0..self.count()).filter(|&i| self.is_2_regular(i)).count()
    }
}
