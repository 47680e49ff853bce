//! Dense vectors and matrices over a [`Scalar`] backend.
//!
//! Everything is desk scale (dimensions below ~10, a few hundred rows),
//! so the implementations favour exactness and determinism over speed:
//! Gaussian elimination with first-nonzero pivoting in exact mode and
//! magnitude pivoting with a tolerance in float mode.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::{is_zero_tol, Scalar};

/// A coordinate vector in the ambient inner-product space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = T::one();
        v
    }

    pub fn ones(dim: usize) -> Self {
        Vector(vec![T::one(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = T::zero();
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            acc += a.clone() * b.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn scale(&self, factor: &T) -> Self {
        Vector(self.0.iter().map(|a| a.clone() * factor.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: &T, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.clone() + factor.clone() * b.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self, tol: &T) -> bool {
        self.0.iter().all(|c| is_zero_tol(c, tol))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for c in &self.0 {
            let a = c.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: fmt::Debug> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vector<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vector::dim);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.dim(), ncols, "ragged rows");
            data.extend(r.0.iter().cloned());
        }
        Matrix { nrows, ncols, data }
    }

    pub fn from_cols(cols: &[Vector<T>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                *m.get_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.ncols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.ncols + c]
    }

    pub fn row(&self, r: usize) -> Vector<T> {
        Vector(self.data[r * self.ncols..(r + 1) * self.ncols].to_vec())
    }

    pub fn col(&self, c: usize) -> Vector<T> {
        Vector((0..self.nrows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn rows(&self) -> Vec<Vector<T>> {
        (0..self.nrows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(self.ncols, v.dim(), "matrix-vector dimension mismatch");
        Vector(
            (0..self.nrows)
                .map(|r| {
                    let mut acc = T::zero();
                    for c in 0..self.ncols {
                        acc += self.get(r, c).clone() * v[c].clone();
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn mat_mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "matrix product dimension mismatch");
        Self::from_fn(self.nrows, other.ncols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.ncols {
                acc += self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::from_fn(self.nrows, self.ncols, |i, j| {
            self.get(i, j).clone() * factor.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.nrows, self.ncols, |i, j| {
            self.get(i, j).clone() + other.get(i, j).clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.nrows, self.ncols, |i, j| {
            self.get(i, j).clone() - other.get(i, j).clone()
        })
    }

    /// Row-major flattening.
    pub fn vec(&self) -> Vector<T> {
        Vector(self.data.clone())
    }

    /// Reduced row echelon form. Returns the reduced matrix and the pivot
    /// column indices. Entries with magnitude at most `tol` are treated as
    /// zero; exact mode passes a zero tolerance.
    pub fn rref(&self, tol: &T) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.ncols {
            if pivot_row >= m.nrows {
                break;
            }
            // Exact mode takes the first usable pivot; float mode the largest.
            let mut best: Option<usize> = None;
            for r in pivot_row..m.nrows {
                if !is_zero_tol(m.get(r, col), tol) {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if !T::EXACT && m.get(r, col).abs() > m.get(b, col).abs() {
                                best = Some(r);
                            }
                        }
                    }
                    if T::EXACT {
                        break;
                    }
                }
            }
            let Some(r) = best else { continue };
            m.swap_rows(pivot_row, r);
            let inv = T::one() / m.get(pivot_row, col).clone();
            for c in 0..m.ncols {
                let v = m.get(pivot_row, c).clone() * inv.clone();
                *m.get_mut(pivot_row, c) = v;
            }
            for other in 0..m.nrows {
                if other == pivot_row || is_zero_tol(m.get(other, col), tol) {
                    continue;
                }
                let factor = m.get(other, col).clone();
                for c in 0..m.ncols {
                    let v = m.get(other, c).clone() - factor.clone() * m.get(pivot_row, c).clone();
                    *m.get_mut(other, c) = v;
                }
                *m.get_mut(other, col) = T::zero();
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: &T) -> usize {
        self.rref(tol).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.ncols {
            self.data.swap(a * self.ncols + c, b * self.ncols + c);
        }
    }

    /// Solves `self * X = rhs` when consistent; `None` otherwise
    /// (picks the particular solution with free variables at zero).
    pub fn solve_matrix(&self, rhs: &Self, tol: &T) -> Option<Self> {
        assert_eq!(self.nrows, rhs.nrows);
        let mut aug = Self::zeros(self.nrows, self.ncols + rhs.ncols);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *aug.get_mut(i, j) = self.get(i, j).clone();
            }
            for j in 0..rhs.ncols {
                *aug.get_mut(i, self.ncols + j) = rhs.get(i, j).clone();
            }
        }
        let (red, pivots) = aug.rref(tol);
        if pivots.iter().any(|&p| p >= self.ncols) {
            return None; // inconsistent system
        }
        let mut x = Self::zeros(self.ncols, rhs.ncols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.ncols {
                *x.get_mut(p, j) = red.get(row, self.ncols + j).clone();
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, rhs: &Vector<T>, tol: &T) -> Option<Vector<T>> {
        let rhs_m = Matrix::from_cols(std::slice::from_ref(rhs));
        self.solve_matrix(&rhs_m, tol).map(|x| x.col(0))
    }

    pub fn inverse(&self, tol: &T) -> Option<Self> {
        assert_eq!(self.nrows, self.ncols);
        let x = self.solve_matrix(&Self::identity(self.nrows), tol)?;
        // solve_matrix succeeds for singular systems with compatible rhs;
        // verify invertibility explicitly.
        if self.mat_mul(&x) == Self::identity(self.nrows) || !T::EXACT {
            if !T::EXACT {
                let prod = self.mat_mul(&x);
                let id = Self::identity(self.nrows);
                for i in 0..self.nrows {
                    for j in 0..self.nrows {
                        if !is_zero_tol(&(prod.get(i, j).clone() - id.get(i, j).clone()), tol) {
                            return None;
                        }
                    }
                }
            }
            Some(x)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        for r in 0..self.nrows {
            writeln!(f, "  {:?}", &self.data[r * self.ncols..(r + 1) * self.ncols])?;
        }
        write!(f, "]")
    }
}

/// Rank of the span of a family of vectors.
pub fn span_rank<T: Scalar>(vectors: &[Vector<T>], tol: &T) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors).rank(tol)
}

/// A maximal linearly independent subfamily, by index, scanning in order.
pub fn independent_subset<T: Scalar>(vectors: &[Vector<T>], tol: &T) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Vec<Vector<T>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        current.push(v.clone());
        if span_rank(&current, tol) == current.len() {
            chosen.push(i);
        } else {
            current.pop();
        }
    }
    chosen
}
