//! Univariate polynomial arithmetic over GF(2^k), plus characteristic and
//! minimal polynomials of matrices and complete factorization.
//!
//! # Representation
//!
//! A polynomial is a `Vec<u8>` of coefficients with the constant term first
//! and no trailing zeros; the zero polynomial is the empty vector. All
//! functions take the [`FieldSpec`] explicitly.
//!
//! # Determinism
//!
//! Factorization uses trace-based splitting in characteristic 2 with a fixed
//! enumeration of splitter candidates instead of random sampling, so results
//! (including factor order, which is sorted canonically) are reproducible.

use crate::{Echelonizer, FflaError, FieldSpec, FqMatrix, Result};

/// Coefficient vector, constant term first, trailing zeros trimmed.
pub type Poly = Vec<u8>;

/// Removes trailing zero coefficients in place.
pub fn normalize(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
#[must_use]
pub fn degree(p: &[u8]) -> Option<usize> {
    let mut d = p.len();
    while d > 0 && p[d - 1] == 0 {
        d -= 1;
    }
    d.checked_sub(1)
}

#[must_use]
pub fn is_zero(p: &[u8]) -> bool {
    degree(p).is_none()
}

/// The constant polynomial `c` (empty when `c == 0`).
#[must_use]
pub fn constant(c: u8) -> Poly {
    if c == 0 {
        Vec::new()
    } else {
        vec![c]
    }
}

/// The monomial `x`.
#[must_use]
pub fn x() -> Poly {
    vec![0, 1]
}

/// Sum of two polynomials (characteristic 2).
#[must_use]
pub fn add(field: FieldSpec, a: &[u8], b: &[u8]) -> Poly {
    let mut out = vec![0u8; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = field.add(x, y);
    }
    normalize(&mut out);
    out
}

/// Product of two polynomials (schoolbook).
#[must_use]
pub fn mul(field: FieldSpec, a: &[u8], b: &[u8]) -> Poly {
    let (da, db) = match (degree(a), degree(b)) {
        (Some(da), Some(db)) => (da, db),
        _ => return Vec::new(),
    };
    let mut out = vec![0u8; da + db + 1];
    for (i, &x) in a.iter().enumerate().take(da + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(db + 1) {
            if y != 0 {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
    }
    out
}

/// Scales a polynomial by a field element.
#[must_use]
pub fn scale(field: FieldSpec, a: &[u8], c: u8) -> Poly {
    if c == 0 {
        return Vec::new();
    }
    let mut out: Poly = a.iter().map(|&v| field.mul(v, c)).collect();
    normalize(&mut out);
    out
}

/// Makes a nonzero polynomial monic.
#[must_use]
pub fn monic(field: FieldSpec, a: &[u8]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let lead = a[d];
            if lead == 1 {
                let mut out = a[..=d].to_vec();
                normalize(&mut out);
                out
            } else {
                scale(field, &a[..=d], field.inv(lead))
            }
        }
    }
}

/// Quotient and remainder of `a / b`.
///
/// # Errors
///
/// Returns an error if `b` is the zero polynomial.
pub fn divrem(field: FieldSpec, a: &[u8], b: &[u8]) -> Result<(Poly, Poly)> {
    let Some(db) = degree(b) else {
        return Err(FflaError::DimensionMismatch {
            op: "poly divrem",
            need: "nonzero divisor".into(),
            got: "zero polynomial".into(),
        });
    };
    let mut rem: Poly = a.to_vec();
    normalize(&mut rem);
    let Some(da) = degree(&rem) else {
        return Ok((Vec::new(), Vec::new()));
    };
    if da < db {
        return Ok((Vec::new(), rem));
    }
    let lead_inv = field.inv(b[db]);
    let mut quot = vec![0u8; da - db + 1];
    for top in (db..=da).rev() {
        let c = field.mul(rem[top], lead_inv);
        if c != 0 {
            quot[top - db] = c;
            for j in 0..=db {
                rem[top - db + j] = field.add(rem[top - db + j], field.mul(c, b[j]));
            }
        }
    }
    normalize(&mut rem);
    normalize(&mut quot);
    Ok((quot, rem))
}

/// Monic greatest common divisor.
#[must_use]
pub fn gcd(field: FieldSpec, a: &[u8], b: &[u8]) -> Poly {
    let mut f: Poly = a.to_vec();
    let mut g: Poly = b.to_vec();
    normalize(&mut f);
    normalize(&mut g);
    while !is_zero(&g) {
        let (_, r) = divrem(field, &f, &g).expect("g is nonzero in the loop");
        f = g;
        g = r;
    }
    monic(field, &f)
}

/// Least common multiple, monic.
#[must_use]
pub fn lcm(field: FieldSpec, a: &[u8], b: &[u8]) -> Poly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let d = gcd(field, a, b);
    let (q, r) = divrem(field, a, &d).expect("gcd of nonzero inputs is nonzero");
    debug_assert!(is_zero(&r));
    monic(field, &mul(field, &q, b))
}

/// Extended Euclid: returns monic `d = gcd(a, b)` and `u, v` with
/// `u*a + v*b = d`.
#[must_use]
pub fn xgcd(field: FieldSpec, a: &[u8], b: &[u8]) -> (Poly, Poly, Poly) {
    let mut r0: Poly = a.to_vec();
    let mut r1: Poly = b.to_vec();
    normalize(&mut r0);
    normalize(&mut r1);
    let (mut u0, mut u1): (Poly, Poly) = (constant(1), Vec::new());
    let (mut v0, mut v1): (Poly, Poly) = (Vec::new(), constant(1));
    while !is_zero(&r1) {
        let (q, r) = divrem(field, &r0, &r1).expect("r1 is nonzero in the loop");
        let nu = add(field, &u0, &mul(field, &q, &u1));
        let nv = add(field, &v0, &mul(field, &q, &v1));
        (r0, r1) = (r1, r);
        (u0, u1) = (u1, nu);
        (v0, v1) = (v1, nv);
    }
    // Scale so the gcd is monic.
    if let Some(d) = degree(&r0) {
        let c = field.inv(r0[d]);
        return (scale(field, &r0, c), scale(field, &u0, c), scale(field, &v0, c));
    }
    (Vec::new(), u0, v0)
}

/// `(a * b) mod m`.
///
/// # Errors
///
/// Returns an error if `m` is zero.
pub fn mul_mod(field: FieldSpec, a: &[u8], b: &[u8], m: &[u8]) -> Result<Poly> {
    let p = mul(field, a, b);
    Ok(divrem(field, &p, m)?.1)
}

/// `base^e mod m` by square-and-multiply.
///
/// # Errors
///
/// Returns an error if `m` is zero.
pub fn pow_mod(field: FieldSpec, base: &[u8], mut e: u64, m: &[u8]) -> Result<Poly> {
    let mut b = divrem(field, base, m)?.1;
    let mut acc = divrem(field, &constant(1), m)?.1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(field, &acc, &b, m)?;
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(field, &b, &b, m)?;
        }
    }
    Ok(acc)
}

/// Evaluates `p` at a scalar.
#[must_use]
pub fn eval_scalar(field: FieldSpec, p: &[u8], at: u8) -> u8 {
    let mut acc = 0u8;
    for &c in p.iter().rev() {
        acc = field.add(field.mul(acc, at), c);
    }
    acc
}

/// Evaluates `p` at a square matrix by Horner's rule (`deg p` products).
///
/// # Errors
///
/// Returns a dimension error if `m` is not square, or propagates arithmetic
/// errors.
pub fn eval_matrix(field: FieldSpec, p: &[u8], m: &FqMatrix) -> Result<FqMatrix> {
    if !m.is_square() {
        return Err(FflaError::DimensionMismatch {
            op: "poly eval_matrix",
            need: "square matrix".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let n = m.nrows();
    let mut acc = FqMatrix::zero(field, n, n)?;
    for &c in p.iter().rev() {
        acc = acc.multiply(m)?;
        if c != 0 {
            let ci = FqMatrix::identity(field, n)?.scale(c)?;
            acc = acc.add(&ci)?;
        }
    }
    Ok(acc)
}

/// Formal derivative. The factor `i` on the coefficient of `x^i` reduces
/// mod 2, so no field parameter is needed in characteristic 2.
#[must_use]
pub fn derivative(p: &[u8]) -> Poly {
    if p.len() < 2 {
        return Vec::new();
    }
    let mut out = vec![0u8; p.len() - 1];
    for (i, o) in out.iter_mut().enumerate() {
        if (i + 1) % 2 == 1 {
            *o = p[i + 1];
        }
    }
    normalize(&mut out);
    out
}

// ----------------------------------------------------------------------
// Characteristic and minimal polynomials
// ----------------------------------------------------------------------

/// Characteristic polynomial (monic, degree `n`) via Hessenberg reduction
/// and the Hessenberg determinant recurrence, `O(n^3)` field operations.
///
/// # Errors
///
/// Returns a dimension error if `m` is not square.
pub fn charpoly(m: &FqMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(FflaError::DimensionMismatch {
            op: "charpoly",
            need: "square matrix".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let field = m.field();
    let n = m.nrows();
    if n == 0 {
        return Ok(constant(1));
    }
    // Unpack to bytes; similarity transforms keep the charpoly fixed.
    let mut h: Vec<Vec<u8>> = (0..n).map(|i| m.row(i)).collect();
    // Reduce to upper Hessenberg form by paired row/column operations.
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h[i][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let t_inv = field.inv(h[col + 1][col]);
        for i in col + 2..n {
            if h[i][col] == 0 {
                continue;
            }
            let u = field.mul(h[i][col], t_inv);
            // row_i += u * row_{col+1}; then col_{col+1} += u * col_i.
            let src = h[col + 1].clone();
            for (x, &s) in h[i].iter_mut().zip(&src) {
                *x = field.add(*x, field.mul(u, s));
            }
            for row in h.iter_mut() {
                let add_in = field.mul(u, row[i]);
                row[col + 1] = field.add(row[col + 1], add_in);
            }
        }
    }
    // p_m = (x + h[m-1][m-1]) p_{m-1} + sum_i h[i-1][m-1] (prod subdiag) p_{i-1}
    // (all signs are + in characteristic 2).
    let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
    p.push(constant(1));
    for m1 in 1..=n {
        let diag = h[m1 - 1][m1 - 1];
        let mut next = mul(field, &[diag, 1], &p[m1 - 1]);
        let mut subprod = 1u8;
        for i in (1..m1).rev() {
            // subprod = prod_{c=i}^{m1-1} h[c][c-1] built incrementally.
            subprod = field.mul(subprod, h[i][i - 1]);
            if subprod == 0 {
                break;
            }
            let hi = h[i - 1][m1 - 1];
            if hi != 0 {
                let term = scale(field, &p[i - 1], field.mul(hi, subprod));
                next = add(field, &next, &term);
            }
        }
        p.push(next);
    }
    Ok(p.pop().expect("loop pushed n+1 entries"))
}

/// Minimal polynomial of `m` at the row vector `v` (the monic generator of
/// the ideal of polynomials `f` with `v f(m) = 0`).
fn vector_minpoly(field: FieldSpec, m: &FqMatrix, v: &[u8]) -> Result<(Poly, Echelonizer)> {
    let n = m.nrows();
    let mut krylov = Echelonizer::with_tracking(field, n);
    let mut w = v.to_vec();
    loop {
        if let Some(coeffs) = krylov.express(&w)? {
            // w = v m^d = sum coeffs[j] v m^j, so the minimal polynomial is
            // x^d + sum coeffs[j] x^j (characteristic 2).
            let d = krylov.rank();
            let mut p = coeffs;
            p.resize(d + 1, 0);
            p[d] = 1;
            return Ok((p, krylov));
        }
        krylov.insert(&w)?;
        w = m.apply_row(&w)?;
    }
}

/// Minimal polynomial (monic) as the least common multiple of cyclic-vector
/// minimal polynomials over a spanning set of seeds.
///
/// # Errors
///
/// Returns a dimension error if `m` is not square.
pub fn minpoly(m: &FqMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(FflaError::DimensionMismatch {
            op: "minpoly",
            need: "square matrix".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let field = m.field();
    let n = m.nrows();
    let mut acc = constant(1);
    let mut seen = Echelonizer::new(field, n);
    for i in 0..n {
        if seen.rank() == n {
            break;
        }
        let mut e = vec![0u8; n];
        e[i] = 1;
        if seen.contains_row(&e)? {
            continue;
        }
        let (local, krylov) = vector_minpoly(field, m, &e)?;
        acc = lcm(field, &acc, &local);
        let basis = krylov.basis_matrix();
        for t in 0..basis.nrows() {
            seen.insert(&basis.row(t))?;
        }
    }
    Ok(acc)
}

// ----------------------------------------------------------------------
// Factorization (characteristic 2)
// ----------------------------------------------------------------------

/// Square root of a polynomial that is a perfect square (all exponents
/// even), using the inverse Frobenius on coefficients.
fn poly_sqrt(field: FieldSpec, p: &[u8]) -> Poly {
    let k = field.k();
    let mut out = vec![0u8; p.len().div_ceil(2)];
    for (i, o) in out.iter_mut().enumerate() {
        let c = p.get(2 * i).copied().unwrap_or(0);
        debug_assert!(p.get(2 * i + 1).copied().unwrap_or(0) == 0, "odd exponent");
        // Inverse of x -> x^2 is x -> x^(2^(k-1)).
        *o = field.pow(c, 1 << (k - 1));
    }
    normalize(&mut out);
    out
}

/// Squarefree decomposition: pairwise-coprime squarefree `g_i` with
/// multiplicity `i` such that the input equals the product of `g_i^i`.
fn squarefree_decomposition(field: FieldSpec, f: &[u8]) -> Result<Vec<(Poly, usize)>> {
    let f = monic(field, f);
    let mut out = Vec::new();
    if degree(&f).unwrap_or(0) == 0 {
        return Ok(out);
    }
    let fp = derivative(&f);
    if is_zero(&fp) {
        // f = s^2 in characteristic 2.
        let s = poly_sqrt(field, &f);
        for (g, m) in squarefree_decomposition(field, &s)? {
            out.push((g, 2 * m));
        }
        return Ok(out);
    }
    let mut c = gcd(field, &f, &fp);
    let mut w = divrem(field, &f, &c)?.0;
    let mut i = 1usize;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(field, &w, &c);
        let z = divrem(field, &w, &y)?.0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(field, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(field, &c, &w)?.0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        // Remaining part is a perfect square.
        let s = poly_sqrt(field, &c);
        for (g, m) in squarefree_decomposition(field, &s)? {
            out.push((g, 2 * m));
        }
    }
    Ok(out)
}

/// Distinct-degree factorization of a monic squarefree polynomial: returns
/// `(product of irreducible factors of degree d, d)` pairs.
fn distinct_degree(field: FieldSpec, f: &[u8]) -> Result<Vec<(Poly, usize)>> {
    let q = field.q() as u64;
    let mut rest = monic(field, f);
    let mut out = Vec::new();
    let mut h = divrem(field, &x(), &rest)?.1;
    let mut d = 0usize;
    while let Some(dr) = degree(&rest) {
        if dr == 0 {
            break;
        }
        d += 1;
        if 2 * d > dr {
            out.push((rest, dr));
            break;
        }
        h = pow_mod(field, &h, q, &rest)?;
        let g = gcd(field, &add(field, &h, &x()), &rest);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = divrem(field, &rest, &g)?.0;
            h = divrem(field, &h, &rest)?.1;
        }
    }
    Ok(out)
}

/// The `idx`-th candidate splitter polynomial: nonconstant polynomials
/// enumerated with coefficients as base-q digits, lowest degrees first.
fn candidate(field: FieldSpec, idx: u64) -> Poly {
    let q = field.q() as u64;
    // Enumerate x * (all polynomials) + low part with a simple counter:
    // interpret idx+q in base q so the result always has degree >= 1.
    let mut n = idx + q;
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % q) as u8);
        n /= q;
    }
    normalize(&mut out);
    out
}

/// Equal-degree factorization, characteristic 2: splits a monic squarefree
/// product of irreducibles of known degree `d` using the GF(2)-trace map
/// `T(a) = a + a^2 + a^4 + ... + a^(2^(kd-1))`, which is 0 or 1 modulo each
/// irreducible factor; a candidate with mixed values yields a proper gcd.
fn equal_degree(field: FieldSpec, f: &[u8], d: usize, out: &mut Vec<Poly>) -> Result<()> {
    let df = degree(f).expect("equal_degree called on nonzero input");
    if df == d {
        out.push(monic(field, f));
        return Ok(());
    }
    let steps = field.k() as usize * d;
    for idx in 0.. {
        let a = divrem(field, &candidate(field, idx), f)?.1;
        let mut s = a.clone();
        let mut trace = a.clone();
        for _ in 1..steps {
            s = mul_mod(field, &s, &s, f)?;
            trace = add(field, &trace, &s);
        }
        for shift in [0u8, 1] {
            let u = add(field, &trace, &constant(shift));
            let g = gcd(field, &u, f);
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 && dg < df {
                equal_degree(field, &g, d, out)?;
                let rest = divrem(field, f, &g)?.0;
                equal_degree(field, &rest, d, out)?;
                return Ok(());
            }
        }
    }
    unreachable!("a splitting candidate always exists for a reducible input")
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficient vector) for a canonical order. The unit
/// leading coefficient is discarded.
///
/// # Errors
///
/// Returns an error for the zero polynomial.
pub fn factor(field: FieldSpec, f: &[u8]) -> Result<Vec<(Poly, usize)>> {
    if is_zero(f) {
        return Err(FflaError::DimensionMismatch {
            op: "poly factor",
            need: "nonzero polynomial".into(),
            got: "zero polynomial".into(),
        });
    }
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(field, f)? {
        for (prod, d) in distinct_degree(field, &part)? {
            let mut irrs = Vec::new();
            equal_degree(field, &prod, d, &mut irrs)?;
            for irr in irrs {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1))
    });
    Ok(out)
}

/// Whether `f` is irreducible (degree >= 1 and a single factor).
///
/// # Errors
///
/// Returns an error for the zero polynomial.
pub fn is_irreducible(field: FieldSpec, f: &[u8]) -> Result<bool> {
    let Some(df) = degree(f) else {
        return Err(FflaError::DimensionMismatch {
            op: "poly is_irreducible",
            need: "nonzero polynomial".into(),
            got: "zero polynomial".into(),
        });
    };
    if df == 0 {
        return Ok(false);
    }
    let fs = factor(field, f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Given pairwise-coprime nonconstant `parts`, returns polynomials `e_i`
/// (mod the product `f`) with `e_i = 1 mod parts[i]` and `0 mod parts[j]`:
/// the CRT idempotent system used to split an algebra along a minimal
/// polynomial factorization.
///
/// # Errors
///
/// Propagates arithmetic errors; the inputs must be pairwise coprime.
pub fn coprime_idempotents(field: FieldSpec, parts: &[Poly]) -> Result<Vec<Poly>> {
    let mut f = constant(1);
    for p in parts {
        f = mul(field, &f, p);
    }
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let rest = divrem(field, &f, p)?.0;
        // xgcd returns a monic gcd, so coprimality means d = 1 exactly and
        // u * rest = 1 mod p already.
        let (d, u, _) = xgcd(field, &rest, p);
        debug_assert_eq!(d, constant(1), "parts must be pairwise coprime");
        let e = mul_mod(field, &u, &rest, &f)?;
        out.push(e);
    }
    Ok(out)
}
