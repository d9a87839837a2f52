//! Permutations of {0, …, n−1}.
//!
//! # Representation
//!
//! A permutation stores its image array: `images[i]` is the image of point
//! `i`. Permutations act on the right, so products compose left-to-right:
//! `x^(p*q) = (x^p)^q`.

use std::fmt;

use crate::{PermError, Result};

/// A permutation of `{0, …, degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    /// The identity permutation on `degree` points.
    #[must_use]
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::NotBijective`] if the array is not a bijection
    /// on `{0, …, len-1}`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img as usize >= n || seen[img as usize] {
                return Err(PermError::NotBijective);
            }
            seen[img as usize] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles
    /// (points not mentioned are fixed).
    ///
    /// # Errors
    ///
    /// Returns [`PermError::NotBijective`] if a point repeats or exceeds
    /// the degree.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (t, &p) in cycle.iter().enumerate() {
                let q = cycle[(t + 1) % cycle.len()];
                if p as usize >= degree || touched[p as usize] {
                    return Err(PermError::NotBijective);
                }
                touched[p as usize] = true;
                images[p as usize] = q;
            }
        }
        Self::from_images(images)
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a point.
    ///
    /// # Panics
    ///
    /// Panics if `point` is out of range.
    #[inline]
    #[must_use]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    #[must_use]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Product `self * other` (apply `self` first, then `other`).
    ///
    /// # Panics
    ///
    /// Panics if the degrees differ.
    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Self {
            images: self.images.iter().map(|&m| other.images[m as usize]).collect(),
        }
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Self { images }
    }

    /// `self^e` for a signed exponent.
    #[must_use]
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Conjugate `self^other = other^-1 * self * other`.
    #[must_use]
    pub fn conjugate_by(&self, other: &Self) -> Self {
        other.inverse().mul(self).mul(other)
    }

    /// Element order (least common multiple of cycle lengths).
    #[must_use]
    pub fn order(&self) -> u64 {
        let mut acc = 1u64;
        for len in self.cycle_lengths() {
            acc = lcm(acc, len as u64);
        }
        acc
    }

    /// Cycle lengths (including fixed points as length-1 cycles).
    #[must_use]
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start as u32;
            loop {
                seen[p as usize] = true;
                len += 1;
                p = self.apply(p);
                if p as usize == start {
                    break;
                }
            }
            out.push(len);
        }
        out
    }

    /// Whether the permutation is even (product of an even number of
    /// transpositions).
    #[must_use]
    pub fn is_even(&self) -> bool {
        self.cycle_lengths().iter().map(|l| l - 1).sum::<usize>() % 2 == 0
    }

    /// Points moved by the permutation.
    #[must_use]
    pub fn support(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i as u32 != img)
            .map(|(i, _)| i as u32)
            .collect()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    /// Disjoint cycle notation, fixed points omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start as u32 {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut p = start as u32;
            let mut first = true;
            loop {
                seen[p as usize] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.apply(p);
                if p as usize == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_validation() {
        assert!(Perm::from_images(vec![1, 0, 2]).is_ok());
        assert!(Perm::from_images(vec![1, 1, 2]).is_err());
        assert!(Perm::from_images(vec![3, 0, 1]).is_err());
        let c = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.images(), &[1, 2, 0, 3, 4]);
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn group_laws() {
        let a = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(a.mul(&a.inverse()), Perm::identity(5));
        assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        // Right action convention: x^(ab) = (x^a)^b.
        let ab = a.mul(&b);
        for x in 0..5 {
            assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
    }

    #[test]
    fn order_parity_and_cycles() {
        let a = Perm::from_cycles(6, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(a.order(), 6);
        assert!(!a.is_even(), "2-cycle times 3-cycle is odd");
        let b = Perm::from_cycles(6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        assert_eq!(b.order(), 6);
        assert!(!b.is_even());
        assert_eq!(b.pow(6), Perm::identity(6));
        assert_eq!(b.pow(-1), b.inverse());
        assert!(Perm::identity(4).is_even());
    }

    #[test]
    fn conjugation_preserves_cycle_type() {
        let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let g = Perm::from_cycles(5, &[vec![0, 3], vec![1, 4]]).unwrap();
        let c = a.conjugate_by(&g);
        let mut t1 = a.cycle_lengths();
        let mut t2 = c.cycle_lengths();
        t1.sort_unstable();
        t2.sort_unstable();
        assert_eq!(t1, t2);
    }

    #[test]
    fn display_cycles() {
        let a = Perm::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(format!("{a}"), "(0 1 2)(3 4)");
        assert_eq!(format!("{}", Perm::identity(3)), "()");
    }
}
