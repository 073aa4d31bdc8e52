//! Dense exact linear algebra over F_{p^f}.
//!
//! Matrices are small (module dimensions stay far below a hundred), so plain
//! Gaussian elimination is used throughout.  Module elements are treated as
//! row vectors elsewhere in the crate; the solvers here follow the usual
//! column conventions, and callers transpose where needed.

use crate::coeff::{Fq, FqTables};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Fq>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(fo, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(fo, "  ")?;
            for j in 0..self.cols {
                write!(fo, "{} ", self.get(i, j))?;
            }
            writeln!(fo)?;
        }
        write!(fo, "]")
    }
}

impl Matrix {
    pub fn zeros(t: &Arc<FqTables>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            a: vec![Fq::int(t, 0); rows * cols],
        }
    }

    pub fn identity(t: &Arc<FqTables>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(t, n, n);
        for i in 0..n {
            m.set(i, i, Fq::int(t, 1));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Fq>(rows: usize, cols: usize, mut f: F) -> Matrix {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        Matrix { rows, cols, a }
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row);
        }
        Matrix { rows: r, cols: c, a }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Fq {
        &self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Fq> {
        self.a[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Fq::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
            }
            acc
        })
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }

    pub fn scale(&self, c: &Fq) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() * c.clone()
        })
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let t = self
            .a
            .iter()
            .find_map(|x| x.tables())
            .expect("matrix power needs attached entries")
            .clone();
        let mut acc = Matrix::identity(&t, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn vstack(&self, below: &Matrix) -> Matrix {
        assert_eq!(self.cols, below.cols);
        let mut a = self.a.clone();
        a.extend(below.a.iter().cloned());
        Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            a,
        }
    }

    /// In-place row reduction to reduced echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.a.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = self.get(r, c).clone().inv().unwrap();
            for j in 0..self.cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let factor = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.get(i, j).clone() - factor.clone() * self.get(r, j).clone();
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : Ax = 0}, one solution per returned row.
    pub fn right_kernel(&self) -> Matrix {
        let t = self
            .a
            .iter()
            .find_map(|x| x.tables())
            .cloned()
            .or_else(|| panic!("kernel needs attached entries"))
            .unwrap();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::new();
        for &fc in &free {
            let mut x = vec![Fq::int(&t, 0); self.cols];
            x[fc] = Fq::int(&t, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -(m.get(r, fc).clone());
            }
            rows.push(x);
        }
        if rows.is_empty() {
            Matrix::zeros(&t, 0, self.cols)
        } else {
            Matrix::from_rows(rows)
        }
    }

    /// One solution x of Ax = b, if any.
    pub fn solve_right(&self, b: &[Fq]) -> Option<Vec<Fq>> {
        assert_eq!(b.len(), self.rows);
        let t = self
            .a
            .iter()
            .chain(b.iter())
            .find_map(|x| x.tables())
            .cloned()?;
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Fq::int(&t, 0); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let t = self
            .a
            .iter()
            .find_map(|x| x.tables())
            .cloned()
            .ok_or_else(|| Error::SolveFailure("inverse of detached matrix".into()))?;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Fq::int(&t, 1)
            } else {
                Fq::int(&t, 0)
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::SolveFailure("singular matrix".into()));
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// A subspace of row vectors, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace {
    tables: Arc<FqTables>,
    pub ambient: usize,
    /// Echelon basis, one vector per row; no zero rows.
    pub basis: Matrix,
}

impl PartialEq for RowSpace {
    fn eq(&self, other: &RowSpace) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}
impl Eq for RowSpace {}

impl RowSpace {
    pub fn from_rows(t: &Arc<FqTables>, ambient: usize, rows: &Matrix) -> RowSpace {
        assert_eq!(rows.cols, ambient);
        let mut m = rows.clone();
        let pivots = m.rref();
        let kept = Matrix::from_fn(pivots.len(), ambient, |i, j| m.get(i, j).clone());
        RowSpace {
            tables: t.clone(),
            ambient,
            basis: kept,
        }
    }

    pub fn zero(t: &Arc<FqTables>, ambient: usize) -> RowSpace {
        RowSpace {
            tables: t.clone(),
            ambient,
            basis: Matrix::zeros(t, 0, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let probe = Matrix::from_rows(vec![v.to_vec()]);
        self.basis.vstack(&probe).rank() == self.dim()
    }

    pub fn contains_space(&self, other: &RowSpace) -> bool {
        self.basis.vstack(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &RowSpace) -> RowSpace {
        RowSpace::from_rows(&self.tables, self.ambient, &self.basis.vstack(&other.basis))
    }

    /// Intersection via the kernel of the stacked basis.
    pub fn intersect(&self, other: &RowSpace) -> RowSpace {
        let a = &self.basis;
        let b = &other.basis;
        if a.rows == 0 || b.rows == 0 {
            return RowSpace::zero(&self.tables, self.ambient);
        }
        // x in both spans: x = u*A = w*B; solve [A^T | -B^T] on coordinates.
        let stacked = Matrix::from_fn(self.ambient, a.rows + b.rows, |i, j| {
            if j < a.rows {
                a.get(j, i).clone()
            } else {
                -(b.get(j - a.rows, i).clone())
            }
        });
        let ker = stacked.right_kernel();
        let mut rows = Vec::new();
        for r in 0..ker.rows {
            let mut v = vec![Fq::int(&self.tables, 0); self.ambient];
            for j in 0..a.rows {
                for c in 0..self.ambient {
                    v[c] = v[c].clone() + ker.get(r, j).clone() * a.get(j, c).clone();
                }
            }
            rows.push(v);
        }
        if rows.is_empty() {
            RowSpace::zero(&self.tables, self.ambient)
        } else {
            RowSpace::from_rows(&self.tables, self.ambient, &Matrix::from_rows(rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Arc<FqTables> {
        FqTables::get(3, 1).unwrap()
    }

    fn m(t: &Arc<FqTables>, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| Fq::int(t, vals[i * cols + j]))
    }

    #[test]
    fn inverse_and_product() {
        let t = t3();
        let a = m(&t, 2, 2, &[1, 2, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&t, 2));
        assert_eq!(inv.mul(&a), Matrix::identity(&t, 2));
        let b = m(&t, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.mul(&b), m(&t, 2, 2, &[2, 1, 1, 1]));
    }

    #[test]
    fn singular_matrix_detected() {
        let t = t3();
        let a = m(&t, 2, 2, &[1, 2, 2, 1]); // det = 1 - 4 = 0 mod 3
        assert!(a.inverse().is_err());
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn kernel_and_solve() {
        let t = t3();
        let a = m(&t, 2, 3, &[1, 0, 1, 0, 1, 2]);
        let k = a.right_kernel();
        assert_eq!(k.rows, 1);
        // check A * k^T = 0
        assert!(a.mul(&k.transpose()).is_zero_matrix());
        let b = vec![Fq::int(&t, 1), Fq::int(&t, 1)];
        let x = a.solve_right(&b).unwrap();
        for i in 0..2 {
            let mut acc = Fq::int(&t, 0);
            for j in 0..3 {
                acc = acc + a.get(i, j).clone() * x[j].clone();
            }
            assert_eq!(acc, b[i]);
        }
        // inconsistent system
        let bad = m(&t, 2, 2, &[1, 1, 2, 2]);
        assert!(bad.solve_right(&[Fq::int(&t, 0), Fq::int(&t, 1)]).is_none());
    }

    #[test]
    fn row_spaces() {
        let t = t3();
        let a = RowSpace::from_rows(&t, 3, &m(&t, 2, 3, &[1, 0, 1, 0, 1, 0]));
        let b = RowSpace::from_rows(&t, 3, &m(&t, 2, 3, &[1, 1, 1, 0, 0, 1]));
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&[Fq::int(&t, 2), Fq::int(&t, 1), Fq::int(&t, 2)]));
        assert!(!a.contains(&[Fq::int(&t, 0), Fq::int(&t, 0), Fq::int(&t, 1)]));
        let s = a.sum(&b);
        assert_eq!(s.dim(), 3);
        let i = a.intersect(&b);
        // dim(a) + dim(b) - dim(sum) = 2 + 2 - 3 = 1
        assert_eq!(i.dim(), 1);
        assert!(a.contains_space(&i) && b.contains_space(&i));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let t = t3();
        let a = m(&t, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(a.pow(0), Matrix::identity(&t, 2));
        assert_eq!(a.pow(5), m(&t, 2, 2, &[1, 5 % 3, 0, 1]));
    }
}
