//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: each row is first scaled to integers and the
//! Bareiss recurrence is run on the integer matrix, so intermediate entries are
//! minors of the input and stay bounded. Rational arithmetic only appears in
//! back substitution.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Schema(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(
            s.parse::<BigInt>().map_err(|_| bad())?,
        )),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Serde adapter for a single scalar as a `"p/q"` string.
pub mod scalar_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_scalar(&v).map_err(D::Error::custom)
    }
}

/// Serde adapter for a vector of scalars.
pub mod vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_scalar).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Scalar>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(|x| value_to_scalar(x).map_err(D::Error::custom))
            .collect()
    }
}

/// Accepts either a JSON string `"p/q"` or a JSON integer.
pub fn value_to_scalar(v: &serde_json::Value) -> std::result::Result<Scalar, String> {
    match v {
        serde_json::Value::String(s) => parse_scalar(s).map_err(|e| e.to_string()),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| format!("non-integer number {n}; use a \"p/q\" string")),
        other => Err(format!("expected rational, got {other}")),
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Mat {
        assert_eq!(
            data.len(),
            rows * cols,
            "entries length must be rows * cols"
        );
        Mat { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Mat {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Mat {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Mat, s: &Scalar) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = &self[(i, j)];
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_rows(
            self.cols,
            idx.iter().map(|&i| self.row(i).to_vec()).collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).fold(Scalar::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn pow(&self, k: usize) -> Mat {
        let mut out = Mat::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && rank(self) == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(0, 0));
        }
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_scalar).collect())
            .collect();
        MatRepr {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Mat, D::Error> {
        let r = MatRepr::deserialize(d)?;
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return Err(D::Error::custom("matrix entries do not match rows x cols"));
        }
        let mut data = Vec::with_capacity(r.rows * r.cols);
        for row in &r.entries {
            for e in row {
                data.push(parse_scalar(e).map_err(D::Error::custom)?);
            }
        }
        Ok(Mat {
            rows: r.rows,
            cols: r.cols,
            data,
        })
    }
}

/// Parses a list of rows (strings or integers) into a matrix of the given shape.
pub fn mat_from_json(v: &serde_json::Value, rows: usize, cols: usize) -> Result<Mat> {
    let bad = |msg: &str| Error::ShapeMismatch(msg.to_string());
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Schema("matrix must be a list of rows".into()))?;
    // An empty list stands for any matrix with a zero dimension.
    if arr.is_empty() && (rows == 0 || cols == 0) {
        return Ok(Mat::zeros(rows, cols));
    }
    if arr.len() != rows {
        return Err(bad(&format!("expected {rows} rows, got {}", arr.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in arr {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Schema("matrix row must be a list".into()))?;
        if row.len() != cols {
            return Err(bad(&format!("expected {cols} columns, got {}", row.len())));
        }
        for e in row {
            data.push(value_to_scalar(e).map_err(Error::Schema)?);
        }
    }
    Ok(Mat::from_vec(rows, cols, data))
}

/// Integer row echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn bareiss(m: &Mat) -> Echelon {
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| integer_row(m.row(i)))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let n = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..n {
            let f = a[i][c].clone();
            for j in c..cols {
                let v = (&piv * &a[i][j] - &f * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            // Columns left of c are already zero below the pivot row.
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &Mat) -> usize {
    bareiss(m).pivots.len()
}

fn strip_content(v: Vec<Scalar>) -> Vec<Scalar> {
    let ints = integer_row(&v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    // Normalise the sign so the first nonzero entry is positive.
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    let g = if sign { -g } else { g };
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// Back substitution on an echelon form, with the given values for free variables.
fn back_substitute(
    e: &Echelon,
    cols: usize,
    free_values: &[(usize, Scalar)],
    rhs: Option<&[BigInt]>,
) -> Vec<Scalar> {
    let mut x = vec![Scalar::zero(); cols];
    for (c, v) in free_values {
        x[*c] = v.clone();
    }
    for (i, &p) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[i];
        let mut s = match rhs {
            Some(r) => BigRational::from_integer(r[i].clone()),
            None => Scalar::zero(),
        };
        for j in p + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                s -= &x[j] * BigRational::from_integer(row[j].clone());
            }
        }
        x[p] = s / BigRational::from_integer(row[p].clone());
    }
    x
}

/// A basis of the right null space together with the free column of each vector.
///
/// Vector `k` has a nonzero entry at `free[k]` and zero at every other free
/// column, so coordinates of a null-space element can be read off directly.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<Scalar>>,
    pub free: Vec<usize>,
}

impl KernelBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates of `v` (assumed to lie in the span) in this basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.vectors
            .iter()
            .zip(&self.free)
            .map(|(b, &f)| &v[f] / &b[f])
            .collect()
    }
}

pub fn kernel(m: &Mat) -> KernelBasis {
    let e = bareiss(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..m.cols).filter(|&c| !is_pivot[c]).collect();
    let vectors = free
        .iter()
        .map(|&f| strip_content(back_substitute(&e, m.cols, &[(f, Scalar::one())], None)))
        .collect();
    KernelBasis { vectors, free }
}

/// Basis of the right null space; vectors have integer entries with content 1.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Scalar>> {
    kernel(m).vectors
}

/// Basis of the left null space `{x : x m = 0}`.
pub fn left_kernel_basis(m: &Mat) -> Vec<Vec<Scalar>> {
    kernel_basis(&m.transpose())
}

/// A particular solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Mat, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let bcol = Mat::from_vec(m.rows, 1, b.to_vec());
    let aug = m.hstack(&bcol);
    let e = bareiss(&aug);
    if e.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let rhs: Vec<BigInt> = e.rows.iter().map(|r| r[m.cols].clone()).collect();
    let trimmed = Echelon {
        rows: e.rows.iter().map(|r| r[..m.cols].to_vec()).collect(),
        pivots: e.pivots.clone(),
    };
    Ok(Some(back_substitute(&trimmed, m.cols, &[], Some(&rhs))))
}

/// Reduced row echelon form over the rationals: (matrix of nonzero rows, pivot columns).
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let e = bareiss(m);
    let cols = m.cols;
    let mut rows: Vec<Vec<Scalar>> = e
        .rows
        .iter()
        .zip(&e.pivots)
        .map(|(r, &p)| {
            let piv = BigRational::from_integer(r[p].clone());
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()) / &piv)
                .collect()
        })
        .collect();
    for i in (0..rows.len()).rev() {
        let p = e.pivots[i];
        for k in 0..i {
            let f = rows[k][p].clone();
            if f.is_zero() {
                continue;
            }
            for j in p..cols {
                let v = &rows[i][j] * &f;
                rows[k][j] -= v;
            }
        }
    }
    (Mat::from_rows(cols, rows), e.pivots)
}

/// Basis of the row space (rows of the reduced echelon form).
pub fn row_space(m: &Mat) -> Mat {
    rref(m).0
}

/// A subspace of `Q^n` kept in reduced echelon form, for membership tests and
/// reduction modulo the subspace.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace {
                basis: Mat::zeros(0, ambient),
                pivots: vec![],
            };
        }
        let (basis, pivots) = rref(&Mat::from_rows(ambient, vectors.to_vec()));
        Subspace { basis, pivots }
    }

    pub fn from_mat(m: &Mat) -> Subspace {
        let (basis, pivots) = rref(m);
        Subspace { basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Eliminates the pivot coordinates of `v`.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x -= b * &f;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` (assumed to lie in the subspace) in the echelon basis.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Unit vector indices completing this subspace to the whole space.
    pub fn complement_units(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient()];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Coordinates of `v` in the quotient basis given by [`Self::complement_units`].
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.complement_units()
            .into_iter()
            .map(|c| r[c].clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::identity(3)), 3);
        assert_eq!(rank(&Mat::zeros(2, 5)), 0);
        assert_eq!(rank(&Mat::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Mat::identity(4)).is_empty());
        assert_eq!(kernel_basis(&Mat::zeros(1, 3)).len(), 3);
        let k = kernel_basis(&Mat::from_i64(&[&[1, 1]]));
        assert_eq!(k, vec![vec![int(1), int(-1)]]);
    }

    #[test]
    fn kernel_vectors_are_primitive_integers() {
        let m = Mat::from_rows(3, vec![vec![frac(1, 2), frac(1, 3), int(0)]]);
        for v in kernel_basis(&m) {
            assert!(v.iter().all(|x| x.denom().is_one()));
            let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
            assert!(g.is_one());
        }
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), int(-1)];
        assert_eq!(solve(&Mat::identity(2), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve(&Mat::zeros(2, 2), &b).unwrap(), None);
        assert_eq!(
            solve(&Mat::from_i64(&[&[2]]), &[int(1)]).unwrap(),
            Some(vec![frac(1, 2)])
        );
        assert!(matches!(
            solve(&Mat::identity(2), &[int(1)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_and_rref() {
        let m = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_reduction() {
        let s = Subspace::span(3, &[vec![int(1), int(1), int(0)]]);
        assert!(s.contains(&[int(2), int(2), int(0)]));
        assert!(!s.contains(&[int(1), int(0), int(0)]));
        assert_eq!(s.complement_units(), vec![1, 2]);
    }

    #[test]
    fn scalar_format_roundtrip() {
        for s in ["3", "-7/2", "0"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(format_scalar(&parse_scalar("4/2").unwrap()), "2");
        assert!(parse_scalar("1/0").is_err());
    }

    fn small_mat() -> impl Strategy<Value = Mat> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |v| Mat::from_vec(r, c, v.into_iter().map(int).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_mat()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solve_is_exact(m in small_mat(), seed in proptest::collection::vec(-3i64..=3, 6)) {
            let x: Vec<Scalar> = (0..m.cols()).map(|i| int(seed[i % seed.len()])).collect();
            let b = m.apply(&x);
            let sol = solve(&m, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.apply(&sol), b);
        }

        #[test]
        fn rank_invariant_under_transpose(m in small_mat()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }
}
