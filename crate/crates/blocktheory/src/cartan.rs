//! Cartan matrices, ingested decomposition tables, and defect orders.
//!
//! # Method
//!
//! A Cartan matrix is assembled either by chopping projective
//! indecomposables and matching their factors against a list of
//! simples, or as DᵀD from an ingested decomposition table. The defect
//! order is the largest elementary divisor; for a 2-block every
//! elementary divisor is a power of 2, which is asserted.
//!
//! # Determinism
//!
//! Chopping uses the caller's seed; the integer reductions are exact.

use modrep::{chop, is_isomorphic, GModule};

use crate::{BlockError, Result};

/// `C[i][j]` = multiplicity of `simples[j]` among the composition
/// factors of `pims[i]`, the projective cover of `simples[i]`.
///
/// # Errors
///
/// [`BlockError::Validation`] when a factor of some projective does
/// not match any provided simple (the inventory is incomplete);
/// propagated chop failures.
pub fn cartan_matrix(
    simples: &[GModule],
    pims: &[GModule],
    seed: u64,
) -> Result<Vec<Vec<u64>>> {
    if simples.len() != pims.len() {
        return Err(BlockError::Validation(format!(
            "{} simples but {} projectives",
            simples.len(),
            pims.len()
        )));
    }
    let mut cartan = Vec::with_capacity(pims.len());
    for pim in pims {
        let result = chop(pim, seed)?;
        let mut row = vec![0u64; simples.len()];
        for (label, factor) in &result.simples {
            let mut matched = None;
            for (j, s) in simples.iter().enumerate() {
                if s.dim() == factor.dim() && is_isomorphic(s, factor, seed)? {
                    matched = Some(j);
                    break;
                }
            }
            let j = matched.ok_or_else(|| {
                BlockError::Validation(format!(
                    "projective has a factor {label} outside the provided simples"
                ))
            })?;
            row[j] = result.multiset.count(label) as u64;
        }
        cartan.push(row);
    }
    for (i, row) in cartan.iter().enumerate() {
        assert!(row[i] > 0, "a projective contains its own head");
        for (j, entry) in row.iter().enumerate().take(i) {
            assert_eq!(*entry, cartan[j][i], "Cartan matrices are symmetric");
        }
    }
    Ok(cartan)
}

/// An ingested 2-modular decomposition table: ordinary character
/// degrees against a fixed ordering of the simples.
pub struct DecompositionTable {
    degrees: Vec<u64>,
    simple_dims: Vec<u64>,
    entries: Vec<Vec<u64>>,
}

impl DecompositionTable {
    /// Validate and wrap table data: one row of `entries` per ordinary
    /// degree, one column per simple, and each row degree must equal
    /// the weighted column sum.
    ///
    /// # Errors
    ///
    /// [`BlockError::Validation`] on any shape or degree mismatch.
    pub fn new(
        degrees: Vec<u64>,
        simple_dims: Vec<u64>,
        entries: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if entries.len() != degrees.len() {
            return Err(BlockError::Validation(format!(
                "{} rows of decomposition numbers for {} ordinary degrees",
                entries.len(),
                degrees.len()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            if row.len() != simple_dims.len() {
                return Err(BlockError::Validation(format!(
                    "row {r} has {} entries for {} simples",
                    row.len(),
                    simple_dims.len()
                )));
            }
            let total: u64 = row.iter().zip(&simple_dims).map(|(d, s)| d * s).sum();
            if total != degrees[r] {
                return Err(BlockError::Validation(format!(
                    "row {r} sums to {total} but the ordinary degree is {}",
                    degrees[r]
                )));
            }
        }
        Ok(DecompositionTable {
            degrees,
            simple_dims,
            entries,
        })
    }

    #[must_use]
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    #[must_use]
    pub fn simple_dims(&self) -> &[u64] {
        &self.simple_dims
    }

    #[must_use]
    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// The Cartan matrix DᵀD of the table.
    #[must_use]
    pub fn cartan(&self) -> Vec<Vec<u64>> {
        let cols = self.simple_dims.len();
        let mut c = vec![vec![0u64; cols]; cols];
        for row in &self.entries {
            for i in 0..cols {
                for j in 0..cols {
                    c[i][j] += row[i] * row[j];
                }
            }
        }
        c
    }

    /// Σ χ(1)² over the rows: the dimension of the block algebra
    /// component these characters span.
    #[must_use]
    pub fn component_dim(&self) -> u64 {
        self.degrees.iter().map(|d| d * d).sum()
    }
}

/// Position of the entry of least absolute value among the nonzero
/// entries of the trailing block starting at `(k, k)`.
fn smallest_nonzero(a: &[Vec<i128>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, &x) in row.iter().enumerate().skip(k) {
            if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Elementary divisors (Smith normal form diagonal) of an integer
/// matrix, in divisibility order.
#[must_use]
pub fn elementary_divisors(mat: &[Vec<u64>]) -> Vec<u64> {
    if mat.is_empty() || mat[0].is_empty() {
        return Vec::new();
    }
    let rows = mat.len();
    let cols = mat[0].len();
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut divisors = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Bring the smallest nonzero entry of the trailing block to
        // the pivot, then clear its row and column by division steps.
        let Some((pi, pj)) = smallest_nonzero(&a, k) else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if a[i][k] != 0 {
                    let q = a[i][k].div_euclid(a[k][k]);
                    let pivot_row = a[k].clone();
                    for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(k) {
                        *x -= q * *p;
                    }
                    if a[i][k] != 0 {
                        a.swap(k, i);
                        clean = false;
                    }
                }
            }
            for j in k + 1..cols {
                if a[k][j] != 0 {
                    let q = a[k][j].div_euclid(a[k][k]);
                    for row in a.iter_mut().skip(k) {
                        let sub = q * row[k];
                        row[j] -= sub;
                    }
                    if a[k][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(k, j);
                        }
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Enforce the divisibility chain: the pivot must divide
            // every entry of the trailing block.
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if a[i][j] % a[k][k] != 0 {
                        let addend = a[i].clone();
                        for (x, v) in a[k].iter_mut().zip(&addend).skip(k) {
                            *x += *v;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        divisors.push(a[k][k].unsigned_abs() as u64);
        k += 1;
    }
    divisors
}

/// Largest elementary divisor of a block Cartan matrix: the defect
/// order. Every elementary divisor of a 2-block Cartan matrix is a
/// power of 2; this is asserted.
#[must_use]
pub fn defect_order(cartan: &[Vec<u64>]) -> u64 {
    let divisors = elementary_divisors(cartan);
    assert!(
        !divisors.is_empty() && divisors.iter().all(|&d| d > 0),
        "a Cartan matrix is square and nonsingular"
    );
    for &d in &divisors {
        assert!(d.is_power_of_two(), "Cartan elementary divisors of a 2-block are 2-powers");
    }
    *divisors.last().expect("at least one divisor")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(m: &[Vec<u64>]) -> Vec<u64> {
        elementary_divisors(m)
    }

    #[test]
    fn known_smith_forms() {
        assert_eq!(snf(&[vec![1]]), vec![1]);
        assert_eq!(snf(&[vec![2, 0], vec![0, 2]]), vec![2, 2]);
        // The principal block Cartan matrix of k𝔖₅ in characteristic 2.
        assert_eq!(snf(&[vec![8, 4], vec![4, 3]]), vec![1, 8]);
        // A non-diagonal example: gcd 2, determinant -12.
        assert_eq!(snf(&[vec![2, 4], vec![4, 2]]), vec![2, 6]);
    }

    #[test]
    fn decomposition_tables_validate_degrees() {
        // Two ordinary characters of degrees 4 and 4 over one simple
        // of dimension 4.
        let t = DecompositionTable::new(vec![4, 4], vec![4], vec![vec![1], vec![1]]).unwrap();
        assert_eq!(t.cartan(), vec![vec![2]]);
        assert_eq!(t.component_dim(), 32);
        assert!(DecompositionTable::new(vec![5], vec![4], vec![vec![1]]).is_err());
        assert!(DecompositionTable::new(vec![4], vec![4], vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn defect_orders_from_cartan_matrices() {
        assert_eq!(defect_order(&[vec![1]]), 1);
        assert_eq!(defect_order(&[vec![2]]), 2);
        assert_eq!(defect_order(&[vec![8, 4], vec![4, 3]]), 8);
    }
}
