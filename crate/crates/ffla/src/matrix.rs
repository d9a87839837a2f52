//! Dense matrices over GF(2^k) with packed storage.
//!
//! # Representation
//!
//! GF(2) matrices are bit-sliced: each row is a run of `u64` words, column
//! `j` living in bit `j % 64` of word `j / 64`, with all padding bits kept
//! zero so that derived equality and hashing are structural. Fields with
//! q > 2 use one byte per entry in row-major order.
//!
//! # Determinism
//!
//! Every operation is a pure function of its operands. The GF(2) kernels use
//! word-parallel XOR and the q > 2 product is computed through a bit-plane
//! decomposition into GF(2) products; both are exercised against schoolbook
//! oracles in the test suite and produce bit-identical results.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::{FflaError, FieldSpec, Result};

/// Process-wide cap on `rows * cols`, adjustable for embedding scenarios.
static ENTRY_CAP: AtomicU64 = AtomicU64::new(1 << 31);

/// Current cap on the number of entries a matrix may hold.
#[must_use]
pub fn entry_cap() -> u64 {
    ENTRY_CAP.load(Ordering::Relaxed)
}

/// Adjusts the process-wide entry cap (default `2^31`). Operations whose
/// operands or results exceed the cap fail with [`FflaError::TooLarge`]
/// instead of attempting the allocation.
pub fn set_entry_cap(cap: u64) {
    ENTRY_CAP.store(cap, Ordering::Relaxed);
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Storage {
    /// q = 2: bit-packed rows, `words_per_row` words each, padding bits zero.
    Bits {
        words_per_row: usize,
        words: Vec<u64>,
    },
    /// q > 2: row-major bytes.
    Bytes(Vec<u8>),
}

/// A dense matrix over a small binary field.
///
/// Matrices are immutable values in practice: all operations return fresh
/// matrices, and the only mutator is [`FqMatrix::set`], used during
/// construction. Cloning is a plain memory copy.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Result of [`FqMatrix::rref`]: the reduced row-echelon form together with
/// its rank and the list of pivot columns in increasing order.
#[derive(Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn check_cap(rows: usize, cols: usize) -> Result<()> {
    let cap = entry_cap();
    if (rows as u64).saturating_mul(cols as u64) > cap {
        return Err(FflaError::TooLarge { rows, cols, cap });
    }
    Ok(())
}

impl FqMatrix {
    // ------------------------------------------------------------------
    // Construction
    // ------------------------------------------------------------------

    /// The `rows x cols` zero matrix.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::TooLarge`] if `rows * cols` exceeds the cap.
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Result<Self> {
        check_cap(rows, cols)?;
        let storage = if field.q() == 2 {
            let wpr = cols.div_ceil(64);
            Storage::Bits {
                words_per_row: wpr,
                words: vec![0; rows * wpr],
            }
        } else {
            Storage::Bytes(vec![0; rows * cols])
        };
        Ok(Self {
            field,
            rows,
            cols,
            storage,
        })
    }

    /// The `n x n` identity matrix.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::TooLarge`] if `n * n` exceeds the cap.
    pub fn identity(field: FieldSpec, n: usize) -> Result<Self> {
        let mut m = Self::zero(field, n, n)?;
        for i in 0..n {
            m.set_unchecked(i, i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from an entry function `f(row, col)`.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::TooLarge`] on cap overflow or
    /// [`FflaError::EntryOutOfRange`] if `f` produces a non-element.
    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut m = Self::zero(field, rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !field.contains(v as u16) {
                    return Err(FflaError::EntryOutOfRange(v as u16, field.q()));
                }
                m.set_unchecked(i, j, v);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from explicit rows (all of equal length).
    ///
    /// # Errors
    ///
    /// Returns a dimension error on ragged input, plus the `from_fn` errors.
    pub fn from_rows(field: FieldSpec, data: &[Vec<u8>]) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(FflaError::DimensionMismatch {
                op: "from_rows",
                need: format!("uniform row length {cols}"),
                got: "ragged rows".into(),
            });
        }
        Self::from_fn(field, rows, cols, |i, j| data[i][j])
    }

    // ------------------------------------------------------------------
    // Accessors
    // ------------------------------------------------------------------

    #[must_use]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[must_use]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)`.
    ///
    /// # Panics
    ///
    /// Panics if the indices are out of range.
    #[inline]
    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.storage {
            Storage::Bits {
                words_per_row,
                words,
            } => ((words[i * words_per_row + j / 64] >> (j % 64)) & 1) as u8,
            Storage::Bytes(b) => b[i * self.cols + j],
        }
    }

    /// Sets the entry at `(i, j)`.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::EntryOutOfRange`] if `v >= q`.
    ///
    /// # Panics
    ///
    /// Panics if the indices are out of range.
    pub fn set(&mut self, i: usize, j: usize, v: u8) -> Result<()> {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if !self.field.contains(v as u16) {
            return Err(FflaError::EntryOutOfRange(v as u16, self.field.q()));
        }
        self.set_unchecked(i, j, v);
        Ok(())
    }

    #[inline]
    fn set_unchecked(&mut self, i: usize, j: usize, v: u8) {
        match &mut self.storage {
            Storage::Bits {
                words_per_row,
                words,
            } => {
                let w = &mut words[i * *words_per_row + j / 64];
                let mask = 1u64 << (j % 64);
                if v & 1 == 1 {
                    *w |= mask;
                } else {
                    *w &= !mask;
                }
            }
            Storage::Bytes(b) => b[i * self.cols + j] = v,
        }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Bits { words, .. } => words.iter().all(|&w| w == 0),
            Storage::Bytes(b) => b.iter().all(|&v| v == 0),
        }
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u8::from(i == j)))
    }

    /// Row `i` unpacked to one byte per entry.
    ///
    /// # Panics
    ///
    /// Panics if `i` is out of range.
    #[must_use]
    pub fn row(&self, i: usize) -> Vec<u8> {
        assert!(i < self.rows, "row index out of range");
        match &self.storage {
            Storage::Bits { .. } => (0..self.cols).map(|j| self.get(i, j)).collect(),
            Storage::Bytes(b) => b[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    /// Overwrites row `i` from a byte slice.
    ///
    /// # Errors
    ///
    /// Returns a dimension error if `v.len() != ncols`, or an entry error.
    ///
    /// # Panics
    ///
    /// Panics if `i` is out of range.
    pub fn set_row(&mut self, i: usize, v: &[u8]) -> Result<()> {
        if v.len() != self.cols {
            return Err(FflaError::DimensionMismatch {
                op: "set_row",
                need: format!("{} entries", self.cols),
                got: format!("{}", v.len()),
            });
        }
        for (j, &e) in v.iter().enumerate() {
            self.set(i, j, e)?;
        }
        Ok(())
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(FflaError::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Arithmetic
    // ------------------------------------------------------------------

    /// Entrywise sum (characteristic 2: XOR).
    ///
    /// # Errors
    ///
    /// Returns field/dimension mismatch errors.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FflaError::DimensionMismatch {
                op: "add",
                need: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        match (&mut out.storage, &other.storage) {
            (Storage::Bits { words, .. }, Storage::Bits { words: ow, .. }) => {
                for (a, b) in words.iter_mut().zip(ow) {
                    *a ^= *b;
                }
            }
            (Storage::Bytes(a), Storage::Bytes(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            _ => unreachable!("same field implies same storage kind"),
        }
        Ok(out)
    }

    /// Multiplies every entry by the scalar `c`.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::EntryOutOfRange`] if `c` is not a field element.
    pub fn scale(&self, c: u8) -> Result<Self> {
        if !self.field.contains(c as u16) {
            return Err(FflaError::EntryOutOfRange(c as u16, self.field.q()));
        }
        let mut out = self.clone();
        match &mut out.storage {
            Storage::Bits { words, .. } => {
                if c == 0 {
                    words.fill(0);
                }
            }
            Storage::Bytes(b) => {
                let q = self.field.q() as usize;
                let trow = &self.field.mul_table()[c as usize * q..(c as usize + 1) * q];
                for x in b.iter_mut() {
                    *x = trow[*x as usize];
                }
            }
        }
        Ok(out)
    }

    /// Matrix product over GF(q).
    ///
    /// # Errors
    ///
    /// Returns field/dimension mismatch or size-cap errors.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(FflaError::DimensionMismatch {
                op: "multiply",
                need: format!("inner dimension {}", self.cols),
                got: format!("{}", other.rows),
            });
        }
        check_cap(self.rows, other.cols)?;
        match (&self.storage, &other.storage) {
            (Storage::Bits { .. }, Storage::Bits { .. }) => self.multiply_gf2(other),
            (Storage::Bytes(_), Storage::Bytes(_)) => {
                // Bit-plane decomposition pays off once the work is large;
                // both paths give identical results.
                let work = self.rows as u64 * self.cols as u64 * other.cols as u64;
                if work >= 1 << 16 {
                    self.multiply_bytes_planes(other)
                } else {
                    Ok(self.multiply_bytes_schoolbook(other))
                }
            }
            _ => unreachable!("same field implies same storage kind"),
        }
    }

    /// GF(2) product: for every set bit of a row of `self`, XOR the matching
    /// row of `other` into the accumulator (word-parallel).
    fn multiply_gf2(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.field, self.rows, other.cols)?;
        let (Storage::Bits {
            words_per_row: wa,
            words: aw,
        }, Storage::Bits {
            words_per_row: wb,
            words: bw,
        }) = (&self.storage, &other.storage)
        else {
            unreachable!()
        };
        let (wa, wb) = (*wa, *wb);
        let Storage::Bits { words: cw, .. } = &mut out.storage else {
            unreachable!()
        };
        for i in 0..self.rows {
            let arow = &aw[i * wa..(i + 1) * wa];
            let crow = &mut cw[i * wb..(i + 1) * wb];
            for (w, &bits0) in arow.iter().enumerate() {
                let mut bits = bits0;
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let brow = &bw[j * wb..(j + 1) * wb];
                    for (c, &b) in crow.iter_mut().zip(brow) {
                        *c ^= b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Schoolbook byte product via the multiplication table.
    fn multiply_bytes_schoolbook(&self, other: &Self) -> Self {
        let (Storage::Bytes(a), Storage::Bytes(b)) = (&self.storage, &other.storage) else {
            unreachable!()
        };
        let q = self.field.q() as usize;
        let table = self.field.mul_table();
        let (n, p) = (self.cols, other.cols);
        let mut c = vec![0u8; self.rows * p];
        for i in 0..self.rows {
            let crow = &mut c[i * p..(i + 1) * p];
            for (jj, &aij) in a[i * n..(i + 1) * n].iter().enumerate() {
                if aij != 0 {
                    let trow = &table[aij as usize * q..(aij as usize + 1) * q];
                    for (ck, &bk) in crow.iter_mut().zip(&b[jj * p..(jj + 1) * p]) {
                        *ck ^= trow[bk as usize];
                    }
                }
            }
        }
        Self {
            field: self.field,
            rows: self.rows,
            cols: p,
            storage: Storage::Bytes(c),
        }
    }

    /// Byte product via bit-plane decomposition: writing A = Σ x^s A_s with
    /// GF(2) planes A_s, the product is Σ x^(s+t) A_s B_t followed by
    /// reduction of the high planes by the defining polynomial. This turns
    /// one GF(q) product into k² word-parallel GF(2) products.
    fn multiply_bytes_planes(&self, other: &Self) -> Result<Self> {
        let k = self.field.k() as usize;
        let gf2 = FieldSpec::from_k(1).expect("GF(2) exists");
        let a_planes = self.bit_planes(gf2);
        let b_planes = other.bit_planes(gf2);
        // planes[d] accumulates the coefficient matrix of x^d, 0 <= d <= 2k-2.
        let mut planes: Vec<FqMatrix> = (0..2 * k - 1)
            .map(|_| FqMatrix::zero(gf2, self.rows, other.cols))
            .collect::<Result<_>>()?;
        for (s, ap) in a_planes.iter().enumerate() {
            for (t, bp) in b_planes.iter().enumerate() {
                let prod = ap.multiply_gf2(bp)?;
                planes[s + t] = planes[s + t].add(&prod)?;
            }
        }
        // Reduce x^d for d >= k using x^k = low part of the modulus.
        let red = self.field.modulus() ^ (1 << k);
        for d in (k..2 * k - 1).rev() {
            let high = planes[d].clone();
            if high.is_zero() {
                continue;
            }
            for s in 0..k {
                if red & (1 << s) != 0 {
                    planes[d - k + s] = planes[d - k + s].add(&high)?;
                }
            }
        }
        let mut out = Self::zero(self.field, self.rows, other.cols)?;
        let Storage::Bytes(ob) = &mut out.storage else {
            unreachable!()
        };
        for (s, plane) in planes.iter().take(k).enumerate() {
            let Storage::Bits {
                words_per_row,
                words,
            } = &plane.storage
            else {
                unreachable!()
            };
            for i in 0..out.rows {
                let prow = &words[i * words_per_row..(i + 1) * words_per_row];
                let orow = &mut ob[i * out.cols..(i + 1) * out.cols];
                for (j, o) in orow.iter_mut().enumerate() {
                    *o |= (((prow[j / 64] >> (j % 64)) & 1) as u8) << s;
                }
            }
        }
        Ok(out)
    }

    /// Splits a byte matrix into its k GF(2) bit planes.
    fn bit_planes(&self, gf2: FieldSpec) -> Vec<FqMatrix> {
        let Storage::Bytes(b) = &self.storage else {
            unreachable!()
        };
        let k = self.field.k() as usize;
        (0..k)
            .map(|s| {
                let mut plane =
                    FqMatrix::zero(gf2, self.rows, self.cols).expect("operand fits the cap");
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        if b[i * self.cols + j] & (1 << s) != 0 {
                            plane.set_unchecked(i, j, 1);
                        }
                    }
                }
                plane
            })
            .collect()
    }

    /// Transpose.
    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut out =
            Self::zero(self.field, self.cols, self.rows).expect("operand already fits the cap");
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0 {
                    out.set_unchecked(j, i, v);
                }
            }
        }
        out
    }

    /// Matrix power by repeated squaring (`pow(m, 0)` is the identity).
    ///
    /// # Errors
    ///
    /// Returns a dimension error if the matrix is not square.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(FflaError::DimensionMismatch {
                op: "pow",
                need: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Echelon forms and linear systems
    // ------------------------------------------------------------------

    /// Reduced row-echelon form with rank and pivot columns.
    #[must_use]
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            m.swap_rows(p, r);
            let lead = m.get(r, col);
            if lead != 1 {
                let inv = m.field.inv(lead);
                m.scale_row(r, inv);
            }
            let pivot_row = m.raw_row(r);
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, col);
                if f != 0 {
                    m.add_scaled_row(i, &pivot_row, f);
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    /// Rank (via [`FqMatrix::rref`]).
    #[must_use]
    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A canonical basis of the row space: the nonzero rows of the RREF.
    #[must_use]
    pub fn row_space(&self) -> Self {
        let r = self.rref();
        r.matrix.take_rows(r.rank)
    }

    /// Basis of the right kernel, one vector per row; the result has
    /// `ncols - rank` rows and satisfies `self * transpose(result) = 0`.
    #[must_use]
    pub fn nullspace(&self) -> Self {
        let Rref {
            matrix: r,
            rank,
            pivots,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut out = Self::zero(self.field, free.len(), self.cols)
            .expect("kernel basis is no larger than the operand");
        for (t, &f) in free.iter().enumerate() {
            out.set_unchecked(t, f, 1);
            for (prow, &pcol) in pivots.iter().enumerate().take(rank) {
                // Char 2: the negation of r[prow][f] is itself.
                let v = r.get(prow, f);
                if v != 0 {
                    out.set_unchecked(t, pcol, v);
                }
            }
        }
        out
    }

    /// Solves `self * x = b` for `x`, returning `None` when inconsistent.
    ///
    /// # Errors
    ///
    /// Returns field/dimension mismatch errors (`self.nrows == b.nrows`).
    pub fn solve(&self, b: &Self) -> Result<Option<Self>> {
        self.check_same_field(b)?;
        if self.rows != b.rows {
            return Err(FflaError::DimensionMismatch {
                op: "solve",
                need: format!("{} rows", self.rows),
                got: format!("{}", b.rows),
            });
        }
        let aug = self.hstack(b)?;
        let Rref {
            matrix: r,
            rank,
            pivots,
        } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zero(self.field, self.cols, b.cols)?;
        for (prow, &pcol) in pivots.iter().enumerate().take(rank) {
            for j in 0..b.cols {
                let v = r.get(prow, self.cols + j);
                if v != 0 {
                    x.set_unchecked(pcol, j, v);
                }
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix.
    ///
    /// # Errors
    ///
    /// Returns [`FflaError::Singular`] when not invertible, or a dimension
    /// error when not square.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(FflaError::DimensionMismatch {
                op: "invert",
                need: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let aug = self.hstack(&Self::identity(self.field, self.rows)?)?;
        let r = aug.rref();
        // The identity block keeps the augmented rank full even when `self`
        // is singular; singularity shows up as a pivot in the right half.
        if r.pivots.iter().any(|&p| p >= self.cols) {
            return Err(FflaError::Singular);
        }
        Ok(r.matrix.select_cols(&(self.cols..2 * self.cols).collect::<Vec<_>>()))
    }

    // ------------------------------------------------------------------
    // Kronecker product and block assembly
    // ------------------------------------------------------------------

    /// Kronecker (tensor) product `self ⊗ other`, with blocks
    /// `self[i][j] * other` in row-major block order.
    ///
    /// # Errors
    ///
    /// Returns field mismatch or size-cap errors.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        check_cap(
            self.rows.saturating_mul(other.rows),
            self.cols.saturating_mul(other.cols),
        )?;
        let mut out = Self::zero(self.field, self.rows * other.rows, self.cols * other.cols)?;
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if b != 0 {
                            out.set_unchecked(
                                i1 * other.rows + i2,
                                j1 * other.cols + j2,
                                self.field.mul(a, b),
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    ///
    /// # Errors
    ///
    /// Returns field/dimension mismatch or size-cap errors.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.rows != other.rows {
            return Err(FflaError::DimensionMismatch {
                op: "hstack",
                need: format!("{} rows", self.rows),
                got: format!("{}", other.rows),
            });
        }
        let mut out = Self::zero(self.field, self.rows, self.cols + other.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0 {
                    out.set_unchecked(i, j, v);
                }
            }
            for j in 0..other.cols {
                let v = other.get(i, j);
                if v != 0 {
                    out.set_unchecked(i, self.cols + j, v);
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation, stacking `self` above `other`.
    ///
    /// # Errors
    ///
    /// Returns field/dimension mismatch or size-cap errors.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(FflaError::DimensionMismatch {
                op: "vstack",
                need: format!("{} cols", self.cols),
                got: format!("{}", other.cols),
            });
        }
        let mut out = Self::zero(self.field, self.rows + other.rows, self.cols)?;
        out.copy_rows_from(self, 0);
        out.copy_rows_from(other, self.rows);
        Ok(out)
    }

    /// Block-diagonal assembly of the given square or rectangular blocks.
    ///
    /// # Errors
    ///
    /// Returns field mismatch or size-cap errors. At least one block is
    /// required (the field cannot be inferred otherwise).
    pub fn block_diag(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or(FflaError::DimensionMismatch {
            op: "block_diag",
            need: "at least one block".into(),
            got: "0 blocks".into(),
        })?;
        let field = first.field;
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zero(field, rows, cols)?;
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            first.check_same_field(b)?;
            for i in 0..b.rows {
                for j in 0..b.cols {
                    let v = b.get(i, j);
                    if v != 0 {
                        out.set_unchecked(r0 + i, c0 + j, v);
                    }
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// The submatrix formed by the given rows, in the given order.
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    #[must_use]
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zero(self.field, idx.len(), self.cols)
            .expect("row selection is no larger than the operand");
        for (t, &i) in idx.iter().enumerate() {
            assert!(i < self.rows, "row index out of range");
            out.copy_row_from(self, i, t);
        }
        out
    }

    /// The submatrix formed by the given columns, in the given order.
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    #[must_use]
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zero(self.field, self.rows, idx.len())
            .expect("column selection is no larger than the operand");
        for (t, &j) in idx.iter().enumerate() {
            assert!(j < self.cols, "column index out of range");
            for i in 0..self.rows {
                let v = self.get(i, j);
                if v != 0 {
                    out.set_unchecked(i, t, v);
                }
            }
        }
        out
    }

    /// The first `r` rows as a new matrix.
    ///
    /// # Panics
    ///
    /// Panics if `r > nrows`.
    #[must_use]
    pub fn take_rows(&self, r: usize) -> Self {
        assert!(r <= self.rows, "take_rows past the end");
        let mut out =
            Self::zero(self.field, r, self.cols).expect("prefix is no larger than the operand");
        for i in 0..r {
            out.copy_row_from(self, i, i);
        }
        out
    }

    /// Row vector–matrix product `v * self` with `v` given as bytes.
    ///
    /// # Errors
    ///
    /// Returns a dimension error if `v.len() != nrows`.
    pub fn apply_row(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.rows {
            return Err(FflaError::DimensionMismatch {
                op: "apply_row",
                need: format!("{} entries", self.rows),
                got: format!("{}", v.len()),
            });
        }
        let mut out = vec![0u8; self.cols];
        match &self.storage {
            Storage::Bits {
                words_per_row,
                words,
            } => {
                let mut acc = vec![0u64; *words_per_row];
                for (i, &c) in v.iter().enumerate() {
                    if c & 1 == 1 {
                        for (a, &w) in acc
                            .iter_mut()
                            .zip(&words[i * words_per_row..(i + 1) * words_per_row])
                        {
                            *a ^= w;
                        }
                    }
                }
                for (j, o) in out.iter_mut().enumerate() {
                    *o = ((acc[j / 64] >> (j % 64)) & 1) as u8;
                }
            }
            Storage::Bytes(b) => {
                let q = self.field.q() as usize;
                let table = self.field.mul_table();
                for (i, &c) in v.iter().enumerate() {
                    if c != 0 {
                        let trow = &table[c as usize * q..(c as usize + 1) * q];
                        for (o, &m) in out.iter_mut().zip(&b[i * self.cols..(i + 1) * self.cols]) {
                            *o ^= trow[m as usize];
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    // ------------------------------------------------------------------
    // Row-level helpers (private)
    // ------------------------------------------------------------------

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        match &mut self.storage {
            Storage::Bits {
                words_per_row,
                words,
            } => {
                let w = *words_per_row;
                for t in 0..w {
                    words.swap(a * w + t, b * w + t);
                }
            }
            Storage::Bytes(bytes) => {
                let c = self.cols;
                for t in 0..c {
                    bytes.swap(a * c + t, b * c + t);
                }
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: u8) {
        match &mut self.storage {
            Storage::Bits { .. } => debug_assert_eq!(c, 1, "GF(2) pivots are already 1"),
            Storage::Bytes(bytes) => {
                let q = self.field.q() as usize;
                let trow = &self.field.mul_table()[c as usize * q..(c as usize + 1) * q];
                for x in &mut bytes[i * self.cols..(i + 1) * self.cols] {
                    *x = trow[*x as usize];
                }
            }
        }
    }

    /// A copy of row `i` in raw storage units (words or bytes).
    fn raw_row(&self, i: usize) -> RawRow {
        match &self.storage {
            Storage::Bits {
                words_per_row,
                words,
            } => RawRow::Words(words[i * words_per_row..(i + 1) * words_per_row].to_vec()),
            Storage::Bytes(b) => RawRow::Bytes(b[i * self.cols..(i + 1) * self.cols].to_vec()),
        }
    }

    /// `row[i] += c * src` where `src` came from [`FqMatrix::raw_row`].
    fn add_scaled_row(&mut self, i: usize, src: &RawRow, c: u8) {
        match (&mut self.storage, src) {
            (Storage::Bits {
                words_per_row,
                words,
            }, RawRow::Words(sw)) => {
                debug_assert_eq!(c, 1);
                for (a, &b) in words[i * *words_per_row..(i + 1) * *words_per_row]
                    .iter_mut()
                    .zip(sw)
                {
                    *a ^= b;
                }
            }
            (Storage::Bytes(bytes), RawRow::Bytes(sb)) => {
                let q = self.field.q() as usize;
                let trow = &self.field.mul_table()[c as usize * q..(c as usize + 1) * q];
                for (a, &b) in bytes[i * self.cols..(i + 1) * self.cols].iter_mut().zip(sb) {
                    *a ^= trow[b as usize];
                }
            }
            _ => unreachable!("row kind matches storage kind"),
        }
    }

    fn copy_row_from(&mut self, src: &Self, src_row: usize, dst_row: usize) {
        debug_assert_eq!(self.cols, src.cols);
        match (&mut self.storage, &src.storage) {
            (Storage::Bits {
                words_per_row,
                words,
            }, Storage::Bits { words: sw, .. }) => {
                let w = *words_per_row;
                words[dst_row * w..(dst_row + 1) * w]
                    .copy_from_slice(&sw[src_row * w..(src_row + 1) * w]);
            }
            (Storage::Bytes(b), Storage::Bytes(sb)) => {
                let c = self.cols;
                b[dst_row * c..(dst_row + 1) * c]
                    .copy_from_slice(&sb[src_row * c..(src_row + 1) * c]);
            }
            _ => unreachable!("same field implies same storage kind"),
        }
    }

    fn copy_rows_from(&mut self, src: &Self, at: usize) {
        for i in 0..src.rows {
            self.copy_row_from(src, i, at + i);
        }
    }
}

enum RawRow {
    Words(Vec<u64>),
    Bytes(Vec<u8>),
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        if self.rows.max(self.cols) > 24 {
            return write!(f, "  (entries elided)");
        }
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:x}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    /// Deterministic pseudo-random matrix for unit tests (xorshift).
    fn pseudo(field: FieldSpec, rows: usize, cols: usize, seed: u64) -> FqMatrix {
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        FqMatrix::from_fn(field, rows, cols, |_, _| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % field.q() as u64) as u8
        })
        .unwrap()
    }

    fn schoolbook(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        let fld = a.field();
        FqMatrix::from_fn(fld, a.nrows(), b.ncols(), |i, j| {
            let mut acc = 0u8;
            for t in 0..a.ncols() {
                acc = fld.add(acc, fld.mul(a.get(i, t), b.get(t, j)));
            }
            acc
        })
        .unwrap()
    }

    #[test]
    fn get_set_round_trip() {
        for q in [2u64, 4, 8, 256] {
            let fld = f(q);
            let mut m = FqMatrix::zero(fld, 5, 70).unwrap();
            m.set(3, 67, (q - 1) as u8).unwrap();
            m.set(0, 0, 1).unwrap();
            assert_eq!(m.get(3, 67), (q - 1) as u8);
            assert_eq!(m.get(0, 0), 1);
            m.set(3, 67, 0).unwrap();
            assert!(m.get(3, 67) == 0);
            if q < 256 {
                assert!(m.set(0, 0, q as u8).is_err(), "q itself is out of range");
            }
        }
    }

    #[test]
    fn multiply_matches_schoolbook_all_fields() {
        for q in [2u64, 4, 8, 16, 256] {
            let fld = f(q);
            let a = pseudo(fld, 13, 9, 17 + q);
            let b = pseudo(fld, 9, 21, 91 + q);
            assert_eq!(a.multiply(&b).unwrap(), schoolbook(&a, &b), "GF({q})");
        }
    }

    #[test]
    fn plane_kernel_matches_schoolbook() {
        // Force the bit-plane path (work >= 2^16) and compare entrywise.
        for q in [4u64, 8, 256] {
            let fld = f(q);
            let a = pseudo(fld, 48, 48, 5);
            let b = pseudo(fld, 48, 48, 6);
            let fast = a.multiply(&b).unwrap();
            assert_eq!(fast, a.multiply_bytes_schoolbook(&b), "GF({q})");
        }
    }

    #[test]
    fn identity_and_zero_laws() {
        let fld = f(4);
        let m = pseudo(fld, 5, 7, 3);
        let i5 = FqMatrix::identity(fld, 5).unwrap();
        let z = FqMatrix::zero(fld, 7, 4).unwrap();
        assert_eq!(i5.multiply(&m).unwrap(), m);
        assert!(m.multiply(&z).unwrap().is_zero());
    }

    #[test]
    fn rref_is_idempotent_and_identity_fixed() {
        let fld = f(8);
        let m = pseudo(fld, 20, 11, 77);
        let r1 = m.rref();
        let r2 = r1.matrix.rref();
        assert_eq!(r1.matrix, r2.matrix);
        assert_eq!(r1.pivots, r2.pivots);
        let i = FqMatrix::identity(fld, 6).unwrap();
        let ri = i.rref();
        assert_eq!(ri.matrix, i);
        assert_eq!(ri.rank, 6);
        let z = FqMatrix::zero(fld, 4, 4).unwrap();
        assert_eq!(z.rref().rank, 0);
        assert!(z.rref().matrix.is_zero());
    }

    #[test]
    fn rank_nullity_and_kernel_annihilation() {
        for q in [2u64, 4] {
            let fld = f(q);
            for seed in 0..6 {
                let m = pseudo(fld, 30, 30, 1000 + seed);
                let ns = m.nullspace();
                assert_eq!(m.rank() + ns.nrows(), m.ncols());
                assert!(m.multiply(&ns.transpose()).unwrap().is_zero());
                // The basis itself is independent.
                assert_eq!(ns.rank(), ns.nrows());
            }
        }
    }

    #[test]
    fn nullspace_edges() {
        let fld = f(2);
        let i = FqMatrix::identity(fld, 8).unwrap();
        assert_eq!(i.nullspace().nrows(), 0);
        let z = FqMatrix::zero(fld, 5, 5).unwrap();
        let ns = z.nullspace();
        assert_eq!(ns.nrows(), 5);
        assert!(ns.is_identity());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let fld = f(4);
        let a = pseudo(fld, 12, 7, 42);
        let x0 = pseudo(fld, 7, 3, 43);
        let b = a.multiply(&x0).unwrap();
        let x = a.solve(&b).unwrap().expect("constructed to be consistent");
        assert_eq!(a.multiply(&x).unwrap(), b);

        // Make an inconsistent target: a vector outside the column space.
        let a = FqMatrix::from_rows(fld, &[vec![1, 0], vec![0, 0]]).unwrap();
        let b = FqMatrix::from_rows(fld, &[vec![0], vec![1]]).unwrap();
        assert!(a.solve(&b).unwrap().is_none());

        // Identity system returns b itself.
        let i = FqMatrix::identity(fld, 4).unwrap();
        let b = pseudo(fld, 4, 2, 9);
        assert_eq!(i.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn invert_round_trip_and_singular() {
        let fld = f(8);
        // Random square matrices are frequently invertible; search a few seeds.
        let mut checked = 0;
        for seed in 0..20 {
            let m = pseudo(fld, 9, 9, 300 + seed);
            if let Ok(inv) = m.invert() {
                assert!(m.multiply(&inv).unwrap().is_identity());
                assert!(inv.multiply(&m).unwrap().is_identity());
                checked += 1;
            }
        }
        assert!(checked > 0, "no invertible sample found");
        let z = FqMatrix::zero(fld, 3, 3).unwrap();
        assert!(matches!(z.invert(), Err(FflaError::Singular)));
    }

    #[test]
    fn kronecker_block_structure_and_dims() {
        let fld = f(4);
        let m = pseudo(fld, 3, 4, 7);
        let i2 = FqMatrix::identity(fld, 2).unwrap();
        let km = i2.kronecker(&m).unwrap();
        assert_eq!((km.nrows(), km.ncols()), (6, 8));
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(km.get(i, j), m.get(i, j));
                assert_eq!(km.get(3 + i, 4 + j), m.get(i, j));
                assert_eq!(km.get(3 + i, j), 0);
                assert_eq!(km.get(i, 4 + j), 0);
            }
        }
        let a = pseudo(fld, 3, 4, 1);
        let b = pseudo(fld, 5, 6, 2);
        let k = a.kronecker(&b).unwrap();
        assert_eq!((k.nrows(), k.ncols()), (15, 24));
    }

    #[test]
    fn kronecker_mixed_product_law() {
        let fld = f(4);
        let a = pseudo(fld, 4, 4, 11);
        let b = pseudo(fld, 4, 4, 12);
        let c = pseudo(fld, 4, 4, 13);
        let d = pseudo(fld, 4, 4, 14);
        let lhs = a.kronecker(&b).unwrap().multiply(&c.kronecker(&d).unwrap()).unwrap();
        let rhs = a.multiply(&c).unwrap().kronecker(&b.multiply(&d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_involution_and_product_rule() {
        for q in [2u64, 16] {
            let fld = f(q);
            let a = pseudo(fld, 6, 9, 21);
            let b = pseudo(fld, 9, 5, 22);
            assert_eq!(a.transpose().transpose(), a);
            assert_eq!(
                a.multiply(&b).unwrap().transpose(),
                b.transpose().multiply(&a.transpose()).unwrap()
            );
        }
    }

    #[test]
    fn stacking_and_selection() {
        let fld = f(2);
        let a = pseudo(fld, 3, 5, 31);
        let b = pseudo(fld, 2, 5, 32);
        let v = a.vstack(&b).unwrap();
        assert_eq!(v.nrows(), 5);
        assert_eq!(v.select_rows(&[0, 1, 2]), a);
        assert_eq!(v.select_rows(&[3, 4]), b);
        let h = a.hstack(&a).unwrap();
        assert_eq!(h.select_cols(&[5, 6, 7, 8, 9]), a);
        assert_eq!(v.take_rows(3), a);
    }

    #[test]
    fn apply_row_matches_multiply() {
        for q in [2u64, 8] {
            let fld = f(q);
            let m = pseudo(fld, 70, 41, 55);
            let v = pseudo(fld, 1, 70, 56);
            let prod = v.multiply(&m).unwrap();
            let fast = m.apply_row(&v.row(0)).unwrap();
            assert_eq!(prod.row(0), fast);
        }
    }

    #[test]
    fn block_diag_assembly() {
        let fld = f(4);
        let a = pseudo(fld, 2, 2, 61);
        let b = pseudo(fld, 3, 3, 62);
        let d = FqMatrix::block_diag(&[a.clone(), b.clone()]).unwrap();
        assert_eq!((d.nrows(), d.ncols()), (5, 5));
        assert_eq!(d.get(0, 0), a.get(0, 0));
        assert_eq!(d.get(2, 2), b.get(0, 0));
        assert_eq!(d.get(0, 2), 0);
    }

    #[test]
    fn pow_matches_repeated_multiply() {
        let fld = f(4);
        let m = pseudo(fld, 5, 5, 71);
        let mut acc = FqMatrix::identity(fld, 5).unwrap();
        for e in 0..6u64 {
            assert_eq!(m.pow(e).unwrap(), acc);
            acc = acc.multiply(&m).unwrap();
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let fld = f(2);
        let err = FqMatrix::zero(fld, 1 << 16, 1 << 16).unwrap_err();
        assert!(matches!(err, FflaError::TooLarge { .. }));
    }

    #[test]
    fn mismatches_are_reported() {
        let f2 = f(2);
        let f4 = f(4);
        let a = FqMatrix::identity(f2, 3).unwrap();
        let b = FqMatrix::identity(f4, 3).unwrap();
        assert!(matches!(a.multiply(&b), Err(FflaError::FieldMismatch(2, 4))));
        let c = FqMatrix::zero(f2, 4, 2).unwrap();
        assert!(matches!(
            a.multiply(&c),
            Err(FflaError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_shapes_are_supported() {
        let fld = f(4);
        let a = FqMatrix::zero(fld, 3, 0).unwrap();
        let b = FqMatrix::zero(fld, 0, 5).unwrap();
        let p = a.multiply(&b).unwrap();
        assert_eq!((p.nrows(), p.ncols()), (3, 5));
        assert!(p.is_zero());
        assert_eq!(b.rref().rank, 0);
        assert_eq!(b.nullspace().nrows(), 5);
    }
}
