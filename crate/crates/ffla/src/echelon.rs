//! Incremental row-space maintenance.
//!
//! [`Echelonizer`] accepts rows one at a time and keeps a fully reduced
//! (RREF-style) internal basis, so membership tests and coordinates cost one
//! row reduction instead of a fresh elimination per query. With tracking
//! enabled it also remembers how each internal row combines the *accepted
//! input rows*, which lets callers express any vector of the span in terms
//! of the rows they actually fed in — the form needed when input rows carry
//! external meaning (spinning words, Krylov powers) that the reduced basis
//! loses.
//!
//! # Determinism
//!
//! The internal basis depends only on the sequence of inserted rows.

use crate::{FflaError, FieldSpec, Result};
use crate::matrix::FqMatrix;

/// One stored row, packed to match the field's matrix storage.
#[derive(Clone)]
enum RowBuf {
    Words(Vec<u64>),
    Bytes(Vec<u8>),
}

impl RowBuf {
    fn pack(field: FieldSpec, cols: usize, row: &[u8]) -> Result<Self> {
        if row.len() != cols {
            return Err(FflaError::DimensionMismatch {
                op: "echelonizer insert",
                need: format!("{cols} entries"),
                got: format!("{}", row.len()),
            });
        }
        for &v in row {
            if !field.contains(v as u16) {
                return Err(FflaError::EntryOutOfRange(v as u16, field.q()));
            }
        }
        Ok(if field.q() == 2 {
            let mut w = vec![0u64; cols.div_ceil(64)];
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            RowBuf::Words(w)
        } else {
            RowBuf::Bytes(row.to_vec())
        })
    }

    fn unpack(&self, cols: usize) -> Vec<u8> {
        match self {
            RowBuf::Words(w) => (0..cols).map(|j| ((w[j / 64] >> (j % 64)) & 1) as u8).collect(),
            RowBuf::Bytes(b) => b.clone(),
        }
    }

    fn get(&self, j: usize) -> u8 {
        match self {
            RowBuf::Words(w) => ((w[j / 64] >> (j % 64)) & 1) as u8,
            RowBuf::Bytes(b) => b[j],
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            RowBuf::Words(w) => w.iter().all(|&x| x == 0),
            RowBuf::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    fn first_nonzero(&self) -> Option<usize> {
        match self {
            RowBuf::Words(w) => w
                .iter()
                .position(|&x| x != 0)
                .map(|i| i * 64 + w[i].trailing_zeros() as usize),
            RowBuf::Bytes(b) => b.iter().position(|&x| x != 0),
        }
    }

    /// `self += c * other`.
    fn axpy(&mut self, field: FieldSpec, c: u8, other: &Self) {
        if c == 0 {
            return;
        }
        match (self, other) {
            (RowBuf::Words(a), RowBuf::Words(b)) => {
                for (x, &y) in a.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
            (RowBuf::Bytes(a), RowBuf::Bytes(b)) => {
                let q = field.q() as usize;
                let trow = &field.mul_table()[c as usize * q..(c as usize + 1) * q];
                for (x, &y) in a.iter_mut().zip(b) {
                    *x ^= trow[y as usize];
                }
            }
            _ => unreachable!("rows of one echelonizer share storage kind"),
        }
    }

    fn scale(&mut self, field: FieldSpec, c: u8) {
        match self {
            RowBuf::Words(_) => debug_assert_eq!(c, 1, "GF(2) leading entries are already 1"),
            RowBuf::Bytes(b) => {
                let q = field.q() as usize;
                let trow = &field.mul_table()[c as usize * q..(c as usize + 1) * q];
                for x in b.iter_mut() {
                    *x = trow[*x as usize];
                }
            }
        }
    }
}

/// Incremental reduced-echelon basis of a growing row space.
pub struct Echelonizer {
    field: FieldSpec,
    cols: usize,
    tracking: bool,
    /// Pivot column of internal row `t`, in insertion order (not sorted).
    pivots: Vec<usize>,
    /// Internal rows; row `t` has a 1 at `pivots[t]` and zeros at every
    /// other row's pivot column.
    rows: Vec<RowBuf>,
    /// With tracking: `combos[t][s]` expresses internal row `t` as a
    /// combination of accepted input rows (`s` over acceptance order).
    combos: Vec<Vec<u8>>,
}

impl Echelonizer {
    /// An empty span over `cols` coordinates.
    #[must_use]
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        Self {
            field,
            cols,
            tracking: false,
            pivots: Vec::new(),
            rows: Vec::new(),
            combos: Vec::new(),
        }
    }

    /// Like [`Echelonizer::new`] but records input-row combinations so that
    /// [`Echelonizer::express`] is available.
    #[must_use]
    pub fn with_tracking(field: FieldSpec, cols: usize) -> Self {
        Self {
            tracking: true,
            ..Self::new(field, cols)
        }
    }

    #[must_use]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in insertion order.
    #[must_use]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Inserts a row; returns `true` when it enlarged the span (and was
    /// recorded as an accepted input), `false` when it was already present.
    ///
    /// # Errors
    ///
    /// Returns a dimension error for a wrong-length row or an entry error
    /// for non-elements.
    pub fn insert(&mut self, row: &[u8]) -> Result<bool> {
        let mut buf = RowBuf::pack(self.field, self.cols, row)?;
        let mut internal = if self.tracking {
            vec![0u8; self.rows.len()]
        } else {
            Vec::new()
        };
        self.reduce_buf(&mut buf, self.tracking.then_some(&mut internal));
        let Some(lead) = buf.first_nonzero() else {
            return Ok(false);
        };
        let lv = buf.get(lead);
        if lv != 1 {
            let inv = self.field.inv(lv);
            buf.scale(self.field, inv);
        }
        let mut combo = Vec::new();
        if self.tracking {
            // Reduction left buf_pre_scale = input + sum internal_t factors;
            // convert the internal-row factors to input coordinates, then
            // scale: the new internal row is inv(lv) * (input + sum ...),
            // and the input itself gets acceptance index `rank`.
            combo = vec![0u8; self.rows.len()];
            for (t, &c) in internal.iter().enumerate() {
                if c != 0 {
                    axpy_vec(self.field, &mut combo, c, &self.combos[t]);
                }
            }
            combo.resize(self.rows.len() + 1, 0);
            combo[self.rows.len()] = 1;
            if lv != 1 {
                scale_vec(self.field, &mut combo, self.field.inv(lv));
            }
        }
        // Back-eliminate the new pivot column from all existing rows.
        for t in 0..self.rows.len() {
            let d = self.rows[t].get(lead);
            if d != 0 {
                self.rows[t].axpy(self.field, d, &buf);
                if self.tracking {
                    axpy_vec(self.field, &mut self.combos[t], d, &combo);
                }
            }
        }
        self.pivots.push(lead);
        self.rows.push(buf);
        if self.tracking {
            self.combos.push(combo);
        }
        Ok(true)
    }

    /// Residual of `row` after reduction by the current basis (all zeros
    /// exactly when the row lies in the span).
    ///
    /// # Errors
    ///
    /// Same conditions as [`Echelonizer::insert`].
    pub fn reduce(&self, row: &[u8]) -> Result<Vec<u8>> {
        let mut buf = RowBuf::pack(self.field, self.cols, row)?;
        self.reduce_buf(&mut buf, None);
        Ok(buf.unpack(self.cols))
    }

    /// Whether `row` lies in the current span.
    ///
    /// # Errors
    ///
    /// Same conditions as [`Echelonizer::insert`].
    pub fn contains_row(&self, row: &[u8]) -> Result<bool> {
        let mut buf = RowBuf::pack(self.field, self.cols, row)?;
        self.reduce_buf(&mut buf, None);
        Ok(buf.is_zero())
    }

    /// Coordinates of `row` over the *accepted input rows*, or `None` when
    /// the row is outside the span. Requires tracking.
    ///
    /// # Errors
    ///
    /// Same conditions as [`Echelonizer::insert`].
    ///
    /// # Panics
    ///
    /// Panics if the echelonizer was built without tracking.
    pub fn express(&self, row: &[u8]) -> Result<Option<Vec<u8>>> {
        assert!(self.tracking, "express requires a tracking echelonizer");
        let mut buf = RowBuf::pack(self.field, self.cols, row)?;
        let mut internal = vec![0u8; self.rows.len()];
        self.reduce_buf(&mut buf, Some(&mut internal));
        if !buf.is_zero() {
            return Ok(None);
        }
        // Convert internal-row coordinates to input coordinates.
        let mut out = vec![0u8; self.rows.len()];
        for (t, &c) in internal.iter().enumerate() {
            if c != 0 {
                axpy_vec(self.field, &mut out, c, &self.combos[t]);
            }
        }
        Ok(Some(out))
    }

    /// Coordinates of `row` over the internal reduced basis (the rows of
    /// [`Echelonizer::basis_matrix`]), or `None` when outside the span.
    ///
    /// # Errors
    ///
    /// Same conditions as [`Echelonizer::insert`].
    pub fn express_internal(&self, row: &[u8]) -> Result<Option<Vec<u8>>> {
        let mut buf = RowBuf::pack(self.field, self.cols, row)?;
        let mut coords = vec![0u8; self.rows.len()];
        self.reduce_buf(&mut buf, Some(&mut coords));
        Ok(buf.is_zero().then_some(coords))
    }

    /// The internal reduced rows, in insertion order, as a matrix.
    #[must_use]
    pub fn basis_matrix(&self) -> FqMatrix {
        let mut m = FqMatrix::zero(self.field, self.rows.len(), self.cols)
            .expect("basis is bounded by previously accepted rows");
        for (t, row) in self.rows.iter().enumerate() {
            m.set_row(t, &row.unpack(self.cols))
                .expect("stored rows are valid");
        }
        m
    }

    /// Reduces `buf` in place; when `coords` is given, records the factor
    /// used at each internal row. Because internal rows are mutually
    /// reduced, the factor for row `t` can be read directly at its pivot.
    fn reduce_buf(&self, buf: &mut RowBuf, coords: Option<&mut Vec<u8>>) {
        let mut coords = coords;
        for (t, p) in self.pivots.iter().enumerate() {
            let c = buf.get(*p);
            if c != 0 {
                buf.axpy(self.field, c, &self.rows[t]);
                if let Some(cs) = coords.as_deref_mut() {
                    cs[t] = self.field.add(cs[t], c);
                }
            }
        }
    }
}

/// `dst += c * src` on coefficient vectors, growing `dst` as needed.
fn axpy_vec(field: FieldSpec, dst: &mut Vec<u8>, c: u8, src: &[u8]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = field.add(*d, field.mul(c, s));
    }
}

fn scale_vec(field: FieldSpec, v: &mut [u8], c: u8) {
    for x in v.iter_mut() {
        *x = field.mul(*x, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn rank_growth_and_membership() {
        let f = fq(2);
        let mut e = Echelonizer::new(f, 4);
        assert!(e.insert(&[1, 1, 0, 0]).unwrap());
        assert!(e.insert(&[0, 1, 1, 0]).unwrap());
        assert!(!e.insert(&[1, 0, 1, 0]).unwrap(), "sum of the first two");
        assert_eq!(e.rank(), 2);
        assert!(e.contains_row(&[1, 0, 1, 0]).unwrap());
        assert!(!e.contains_row(&[0, 0, 0, 1]).unwrap());
        assert!(e.reduce(&[1, 1, 0, 1]).unwrap() == vec![0, 0, 0, 1]);
    }

    #[test]
    fn basis_matrix_spans_inserts() {
        let f = fq(4);
        let rows = [
            vec![1u8, 2, 3, 0, 1],
            vec![0u8, 1, 1, 1, 0],
            vec![1u8, 3, 2, 1, 1],
            vec![2u8, 0, 1, 0, 3],
        ];
        let mut e = Echelonizer::new(f, 5);
        for r in &rows {
            e.insert(r).unwrap();
        }
        let m = FqMatrix::from_rows(f, &rows).unwrap();
        assert_eq!(e.rank(), m.rank());
        let b = e.basis_matrix();
        assert_eq!(b.rank(), e.rank());
        for r in &rows {
            assert!(e.contains_row(r).unwrap());
        }
        // Every internal row reduces to zero against the original row space.
        let rs = m.row_space();
        for t in 0..b.nrows() {
            let mut chk = Echelonizer::new(f, 5);
            for i in 0..rs.nrows() {
                chk.insert(&rs.row(i)).unwrap();
            }
            assert!(chk.contains_row(&b.row(t)).unwrap());
        }
    }

    #[test]
    fn express_recovers_input_combination() {
        let f = fq(4);
        let inputs = [
            vec![1u8, 2, 0, 1],
            vec![3u8, 1, 1, 0],
            vec![0u8, 0, 2, 2],
        ];
        let mut e = Echelonizer::with_tracking(f, 4);
        for r in &inputs {
            assert!(e.insert(r).unwrap());
        }
        // Target = 2*inputs[0] + 1*inputs[1] + 3*inputs[2].
        let coeffs = [2u8, 1, 3];
        let mut target = vec![0u8; 4];
        for (c, row) in coeffs.iter().zip(&inputs) {
            for j in 0..4 {
                target[j] = f.add(target[j], f.mul(*c, row[j]));
            }
        }
        let got = e.express(&target).unwrap().expect("in span");
        assert_eq!(got, coeffs.to_vec());
        assert!(e.express(&[1, 0, 0, 0]).unwrap().is_none(), "outside span");
    }

    #[test]
    fn express_handles_dependent_inserts() {
        let f = fq(2);
        let mut e = Echelonizer::with_tracking(f, 3);
        assert!(e.insert(&[1, 1, 0]).unwrap());
        assert!(e.insert(&[0, 1, 1]).unwrap());
        // Dependent: not recorded as an input.
        assert!(!e.insert(&[1, 0, 1]).unwrap());
        assert!(e.insert(&[1, 1, 1]).unwrap());
        let got = e.express(&[0, 0, 1]).unwrap().expect("in span");
        // [0,0,1] = input0 + input1 + ... check by recombination.
        let inputs = [vec![1u8, 1, 0], vec![0u8, 1, 1], vec![1u8, 1, 1]];
        let mut acc = vec![0u8; 3];
        for (c, row) in got.iter().zip(&inputs) {
            for j in 0..3 {
                acc[j] = f.add(acc[j], f.mul(*c, row[j]));
            }
        }
        assert_eq!(acc, vec![0, 0, 1]);
    }

    #[test]
    fn zero_width_is_fine() {
        let f = fq(2);
        let mut e = Echelonizer::new(f, 0);
        assert!(!e.insert(&[]).unwrap());
        assert_eq!(e.rank(), 0);
    }
}
