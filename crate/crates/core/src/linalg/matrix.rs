//! Dense matrices over `Q(i)` and row reduction.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num::{One, Zero};

use super::gaussian::GaussianRational;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Column vector over `Q(i)`.
pub type Vector = Vec<GaussianRational>;

/// Row-major dense matrix over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussianRational::one())
    }

    pub fn scalar(n: usize, value: &GaussianRational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = value.clone();
        }
        m
    }

    pub fn diagonal(values: &[GaussianRational]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    /// Build from row vectors. An empty list gives the `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, entries })
    }

    /// Convenience for fixtures: integer pairs `(re, im)` in row-major order.
    pub fn from_int_pairs(rows: &[&[(i64, i64)]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect())
            .collect();
        Self::from_rows(data).expect("ragged fixture")
    }

    /// Build an `nrows x columns.len()` matrix from column vectors.
    pub fn from_columns(nrows: usize, columns: &[Vector]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(nrows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m.entries[i * cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, value: GaussianRational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn conj(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(GaussianRational::conj).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Matrix,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let mut cols = self.columns();
        cols.extend(rhs.columns());
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn trace(&self) -> GaussianRational {
        let n = self.rows.min(self.cols);
        let mut t = GaussianRational::zero();
        for i in 0..n {
            t += &self[(i, i)];
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        rref(&mut rows, self.cols).len()
    }

    /// The canonical subspace `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let mut rows = self.to_rows();
        let pivots = rref(&mut rows, self.cols);
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        let mut free = Vec::new();
        for c in 0..self.cols {
            if pivot_iter.peek() == Some(&&c) {
                pivot_iter.next();
            } else {
                free.push(c);
            }
        }
        for &fc in &free {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[fc] = GaussianRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[r][fc];
            }
            basis.push(v);
        }
        Subspace::span(self.cols, basis).expect("kernel vectors have matching length")
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hcat(&Matrix::identity(n))?;
        let mut rows = aug.to_rows();
        let pivots = rref(&mut rows, 2 * n);
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::Singular);
        }
        let inv_rows = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(inv_rows)
    }

    /// Some solution `x` of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[GaussianRational]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut rows: Vec<Vector> = self
            .to_rows()
            .into_iter()
            .zip(b)
            .map(|(mut r, bi)| {
                r.push(bi.clone());
                r
            })
            .collect();
        let pivots = rref(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[r][self.cols].clone();
        }
        Some(x)
    }
}

pub(crate) fn dot(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Reduce `rows` (each of length `ncols`) in place to reduced row-echelon form.
///
/// Pivot rows are moved to the front with their pivot normalized to one; the
/// returned vector lists pivot columns in increasing order, one per pivot row.
pub(crate) fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for v in rows[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let factor = other[c].clone();
            for k in c..ncols {
                if !pivot_row[k].is_zero() {
                    let d = &factor * &pivot_row[k];
                    other[k] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    /// Panics on a dimension mismatch; use [`Matrix::try_mul`] to get an error instead.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(2, 2).kernel(), Subspace::full(2));
        assert_eq!(Matrix::identity(2).kernel(), Subspace::zero(2));
        let m = Matrix::from_int_pairs(&[&[(1, 0), (0, 1)], &[(0, 0), (0, 0)]]);
        let expected = Subspace::span(2, vec![vec![g(0, -1), g(1, 0)]]).unwrap();
        assert_eq!(m.kernel(), expected);
    }

    #[test]
    fn rank_nullity() {
        let m = Matrix::from_int_pairs(&[
            &[(1, 0), (2, 1), (0, 3)],
            &[(2, 0), (4, 2), (0, 6)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().dim(), 2);
        for v in m.kernel().vectors() {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_int_pairs(&[&[(1, 0), (0, 1)], &[(0, 0), (1, 1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert_eq!(&inv * &m, Matrix::identity(2));
        let singular = Matrix::from_int_pairs(&[&[(1, 0), (2, 0)], &[(2, 0), (4, 0)]]);
        assert!(matches!(singular.inverse(), Err(Error::Singular)));
        let x = m.solve(&[g(1, 0), g(2, 0)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![g(1, 0), g(2, 0)]);
        assert!(singular.solve(&[g(1, 0), g(0, 0)]).is_none());
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::new(2, 2, vec![g(1, 0)]).is_err());
        assert!(Matrix::from_rows(vec![vec![g(1, 0)], vec![]]).is_err());
        assert!(Matrix::zeros(2, 3).try_mul(&Matrix::zeros(2, 3)).is_err());
        assert!(matches!(Matrix::zeros(2, 3).inverse(), Err(Error::NotSquare { .. })));
    }
}
