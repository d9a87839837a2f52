//! Right coset tables with canonical coset keys.
//!
//! # Representation
//!
//! A coset `U·x` is identified by its canonical key: the lexicographically
//! least image vector among `{u·x : u ∈ U}`. Keys make coset identity
//! independent of the representative, and the table is built by BFS over
//! the parent's generators, recording for every coset the tree edge that
//! discovered it and, per generator, the full action on coset indices.
//!
//! # Determinism
//!
//! BFS order follows the generator list; coset 0 is `U`. The table is a
//! pure function of (subgroup element list, parent generators).

use std::collections::HashMap;

use crate::{Perm, PermGroup, Result, Subgroup};

/// The right cosets of a subgroup, with generator actions.
pub struct CosetTable {
    sub_elements: Vec<Perm>,
    reps: Vec<Perm>,
    parent_edge: Vec<Option<(usize, usize)>>,
    /// `actions[gen][coset]` is the index of `coset · gen`.
    actions: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl CosetTable {
    /// Builds the table of right cosets of `sub` in `parent`.
    ///
    /// # Errors
    ///
    /// Propagates enumeration failures of the subgroup.
    ///
    /// # Panics
    ///
    /// Panics if the subgroup's elements do not lie in the parent's
    /// degree, or if the coset count times the subgroup order disagrees
    /// with the parent order (i.e. the element list was not a subgroup).
    pub fn build(parent: &PermGroup, sub: &Subgroup) -> Result<Self> {
        let sub_elements = sub.elements()?.to_vec();
        assert!(
            sub_elements.iter().all(|u| u.degree() == parent.degree()),
            "subgroup degree matches parent"
        );
        let gens = parent.generators();
        let id = Perm::identity(parent.degree());
        let mut reps = vec![id.clone()];
        let mut parent_edge = vec![None];
        let mut index = HashMap::new();
        index.insert(canonical_key(&sub_elements, &id), 0usize);
        let mut actions: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut c = 0;
        while c < reps.len() {
            for (j, g) in gens.iter().enumerate() {
                let y = reps[c].mul(g);
                let key = canonical_key(&sub_elements, &y);
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = reps.len();
                        index.insert(key, t);
                        reps.push(y);
                        parent_edge.push(Some((c, j)));
                        for a in actions.iter_mut() {
                            debug_assert!(a.len() <= t);
                        }
                        t
                    }
                };
                actions[j].push(target as u32);
                debug_assert_eq!(actions[j].len(), c + 1);
            }
            c += 1;
        }
        assert_eq!(
            reps.len() as u64 * sub_elements.len() as u64,
            parent.order(),
            "coset count times subgroup order equals group order"
        );
        Ok(Self {
            sub_elements,
            reps,
            parent_edge,
            actions,
            index,
        })
    }

    /// Number of cosets.
    #[must_use]
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The stored representative of coset `i` (coset 0 is the subgroup).
    #[must_use]
    pub fn rep(&self, i: usize) -> &Perm {
        &self.reps[i]
    }

    /// The BFS edge `(parent coset, generator index)` that discovered
    /// coset `i`; `None` for coset 0.
    #[must_use]
    pub fn parent_edge(&self, i: usize) -> Option<(usize, usize)> {
        self.parent_edge[i]
    }

    /// The action of parent generator `j` on coset indices.
    #[must_use]
    pub fn action(&self, j: usize) -> &[u32] {
        &self.actions[j]
    }

    /// Index of the coset containing `x`, or `None` when `x` lies outside
    /// the parent group.
    #[must_use]
    pub fn coset_of(&self, x: &Perm) -> Option<usize> {
        self.index.get(&canonical_key(&self.sub_elements, x)).copied()
    }

    /// Index of `coset · x` for a parent element `x`.
    ///
    /// # Panics
    ///
    /// Panics when `x` does not lie in the parent group.
    #[must_use]
    pub fn act(&self, coset: usize, x: &Perm) -> usize {
        let y = self.reps[coset].mul(x);
        *self
            .index
            .get(&canonical_key(&self.sub_elements, &y))
            .expect("acting element lies in the parent group")
    }
}

/// Lexicographically least image vector over the coset `U·x`.
fn canonical_key(sub_elements: &[Perm], x: &Perm) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for u in sub_elements {
        let img = u.mul(x);
        let v = img.images().to_vec();
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap_or_else(|| x.images().to_vec())
}
