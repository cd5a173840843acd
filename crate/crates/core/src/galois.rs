//! Exact arithmetic and linear algebra over prime fields GF(p).
//!
//! Scalars are stored as canonical representatives in `[0, p)`. Vectors and
//! matrices carry their modulus, and every binary operation rejects operands
//! over different fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field GF(p). Cheap to copy; all scalar arithmetic goes through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }
}

/// A single element of GF(p) together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldScalar {
    value: u32,
    p: u32,
}

impl FieldScalar {
    pub fn new(value: i64, field: PrimeField) -> Self {
        FieldScalar {
            value: field.reduce(value),
            p: field.modulus(),
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    fn field(self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn same_field(self, other: FieldScalar) -> Result<PrimeField> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(self.field())
    }

    pub fn checked_add(self, other: FieldScalar) -> Result<FieldScalar> {
        let f = self.same_field(other)?;
        Ok(FieldScalar {
            value: f.add(self.value, other.value),
            p: self.p,
        })
    }

    pub fn checked_sub(self, other: FieldScalar) -> Result<FieldScalar> {
        let f = self.same_field(other)?;
        Ok(FieldScalar {
            value: f.sub(self.value, other.value),
            p: self.p,
        })
    }

    pub fn checked_mul(self, other: FieldScalar) -> Result<FieldScalar> {
        let f = self.same_field(other)?;
        Ok(FieldScalar {
            value: f.mul(self.value, other.value),
            p: self.p,
        })
    }

    pub fn inv(self) -> Option<FieldScalar> {
        self.field().inv(self.value).map(|value| FieldScalar { value, p: self.p })
    }
}

// The operator impls panic on mixed moduli; use the `checked_*` forms when
// the operands come from untrusted input.
impl Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: FieldScalar) -> FieldScalar {
        self.checked_add(rhs).expect("mixed-modulus scalar addition")
    }
}

impl Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: FieldScalar) -> FieldScalar {
        self.checked_sub(rhs).expect("mixed-modulus scalar subtraction")
    }
}

impl Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: FieldScalar) -> FieldScalar {
        self.checked_mul(rhs).expect("mixed-modulus scalar multiplication")
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A fixed-length vector over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVector {
    p: u32,
    entries: Vec<u32>,
}

impl FieldVector {
    /// Builds a vector from arbitrary integers, reducing each one mod p.
    pub fn new<I: IntoIterator<Item = i64>>(field: PrimeField, entries: I) -> Self {
        FieldVector {
            p: field.modulus(),
            entries: entries.into_iter().map(|v| field.reduce(v)).collect(),
        }
    }

    /// Builds a vector from already-reduced entries.
    pub fn from_reduced(field: PrimeField, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} is not reduced mod {}",
                field.modulus()
            )));
        }
        Ok(FieldVector {
            p: field.modulus(),
            entries,
        })
    }

    pub fn zeros(field: PrimeField, len: usize) -> Self {
        FieldVector {
            p: field.modulus(),
            entries: vec![0; len],
        }
    }

    pub fn unit(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, len);
        v.entries[i] = 1 % field.modulus();
        v
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> FieldScalar {
        FieldScalar {
            value: self.entries[i],
            p: self.p,
        }
    }

    pub fn set(&mut self, i: usize, value: i64) {
        self.entries[i] = self.field().reduce(value);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    fn compatible(&self, other: &FieldVector) -> Result<PrimeField> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self.field())
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        let f = self.compatible(other)?;
        Ok(FieldVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &FieldVector) -> Result<FieldVector> {
        let f = self.compatible(other)?;
        Ok(FieldVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> FieldVector {
        let f = self.field();
        FieldVector {
            p: self.p,
            entries: self.entries.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FieldVector {
        let f = self.field();
        let c = c % self.p;
        FieldVector {
            p: self.p,
            entries: self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn dot(&self, other: &FieldVector) -> Result<u32> {
        let f = self.compatible(other)?;
        Ok(dot_raw(f, &self.entries, &other.entries))
    }
}

#[inline]
pub(crate) fn dot_raw(f: PrimeField, a: &[u32], b: &[u32]) -> u32 {
    let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (acc % f.modulus() as u64) as u32
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            p: field.modulus(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Builds a matrix from rows of arbitrary integers (reduced mod p).
    /// All rows must have the same length; `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = field.reduce(v);
            }
        }
        Ok(m)
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[FieldVector]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.modulus() != field.modulus() {
                return Err(Error::ModulusMismatch(field.modulus(), c.modulus()));
            }
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in 0..rows {
                m.data[i * m.cols + j] = c.entries[i];
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = self.field().reduce(value);
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector {
            p: self.p,
            entries: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn row_slice(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> FieldVector {
        FieldVector {
            p: self.p,
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    /// Rows as plain integer lists, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row_slice(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field();
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FieldVector) -> Result<FieldVector> {
        if self.p != v.p {
            return Err(Error::ModulusMismatch(self.p, v.p));
        }
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(FieldVector {
            p: self.p,
            entries: self.mul_raw(&v.entries),
        })
    }

    /// Matrix-vector product on raw reduced entries; lengths are the caller's
    /// responsibility.
    pub(crate) fn mul_raw(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        (0..self.rows)
            .map(|i| dot_raw(f, self.row_slice(i), v))
            .collect()
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let f = self.field();
        Ok(FieldMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> FieldMatrix {
        let f = self.field();
        FieldMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c % self.p)).collect(),
        }
    }

    /// `[self; other]`, stacking rows.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn row_reduce(&self) -> RowReduction {
        RowReduction::new(self)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank()
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form `R = E·A` together with the invertible transform
/// `E`, so that many right-hand sides can be solved against the same `A`.
///
/// Pivoting is deterministic: columns are scanned left to right and the first
/// row at or below the current one with a nonzero entry becomes the pivot.
#[derive(Debug, Clone)]
pub struct RowReduction {
    rref: FieldMatrix,
    transform: FieldMatrix,
    pivots: Vec<usize>,
}

impl RowReduction {
    fn new(a: &FieldMatrix) -> Self {
        let f = a.field();
        let mut r = a.clone();
        let mut e = FieldMatrix::identity(f, a.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(piv) = (row..a.rows).find(|&i| r.get(i, col) != 0) else {
                continue;
            };
            swap_rows(&mut r, row, piv);
            swap_rows(&mut e, row, piv);
            let inv = f.inv(r.get(row, col)).expect("pivot is nonzero");
            scale_row(&mut r, row, inv);
            scale_row(&mut e, row, inv);
            for i in 0..a.rows {
                if i != row {
                    let c = r.get(i, col);
                    if c != 0 {
                        let c = f.neg(c);
                        axpy_row(&mut r, i, row, c);
                        axpy_row(&mut e, i, row, c);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        RowReduction {
            rref: r,
            transform: e,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rref(&self) -> &FieldMatrix {
        &self.rref
    }

    /// One solution of `A x = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &FieldVector) -> Result<Option<FieldVector>> {
        if b.modulus() != self.rref.modulus() {
            return Err(Error::ModulusMismatch(self.rref.modulus(), b.modulus()));
        }
        if b.len() != self.rref.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rref.rows,
                found: b.len(),
            });
        }
        Ok(self.solve_raw(b.entries()).map(|entries| FieldVector {
            p: self.rref.p,
            entries,
        }))
    }

    pub(crate) fn solve_raw(&self, b: &[u32]) -> Option<Vec<u32>> {
        let eb = self.transform.mul_raw(b);
        if eb[self.rank()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0; self.rref.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = eb[i];
        }
        Some(x)
    }

    /// Basis of the right kernel, one vector per free column in increasing
    /// column order.
    pub fn kernel_basis(&self) -> Vec<FieldVector> {
        let f = self.rref.field();
        let cols = self.rref.cols;
        let mut is_pivot = vec![false; cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; cols];
                v[free] = 1;
                for (i, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = f.neg(self.rref.get(i, free));
                }
                FieldVector {
                    p: f.modulus(),
                    entries: v,
                }
            })
            .collect()
    }
}

fn swap_rows(m: &mut FieldMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn scale_row(m: &mut FieldMatrix, i: usize, c: u32) {
    let f = m.field();
    for j in 0..m.cols {
        let idx = i * m.cols + j;
        m.data[idx] = f.mul(m.data[idx], c);
    }
}

/// row[dst] += c * row[src]
fn axpy_row(m: &mut FieldMatrix, dst: usize, src: usize, c: u32) {
    let f = m.field();
    for j in 0..m.cols {
        let s = m.data[src * m.cols + j];
        if s != 0 {
            let idx = dst * m.cols + j;
            m.data[idx] = f.add(m.data[idx], f.mul(c, s));
        }
    }
}

/// A particular solution of `A x = b` together with a basis of `ker A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: FieldVector,
    pub kernel: Vec<FieldVector>,
}

/// Solves `A x = b`; `Ok(None)` when the system is inconsistent.
pub fn linear_solve(a: &FieldMatrix, b: &FieldVector) -> Result<Option<Solution>> {
    let rr = a.row_reduce();
    Ok(rr.solve(b)?.map(|particular| Solution {
        particular,
        kernel: rr.kernel_basis(),
    }))
}

/// Number of `r`-dimensional subspaces of GF(q)^m, from the orbit-stabilizer
/// count `g(m) / (g(r) g(m-r) q^{(m-r)r})` with `g(k) = #GL_k(q)`.
pub fn gaussian_binomial(m: u32, q: u32, r: u32) -> Result<BigUint> {
    if r > m {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {r} exceeds ambient dimension {m}"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("field size {q} < 2")));
    }
    let q_big = BigUint::from(q);
    let gl = |k: u32| -> BigUint {
        let qk = q_big.pow(k);
        (0..k).fold(BigUint::one(), |acc, i| acc * (&qk - q_big.pow(i)))
    };
    let denom = gl(r) * gl(m - r) * q_big.pow((m - r) * r);
    Ok(gl(m) / denom)
}

/// `N(n, q, d) = sum_{i=0}^{d} C(n, i) (q^2 - 1)^i`, the number of Weyl pairs
/// `(a, b)` over an alphabet of size `q` with weight at most `d`. Terms with
/// `i > n` vanish, so `d > n` gives the full count `q^{2n}`.
pub fn error_sphere_count(n: u32, q: u32, d: u32) -> BigUint {
    let per_site = BigUint::from(q as u64 * q as u64 - 1);
    let mut total = BigUint::zero();
    for i in 0..=d.min(n) {
        total += binomial(BigUint::from(n), BigUint::from(i)) * per_site.pow(i);
    }
    total
}
