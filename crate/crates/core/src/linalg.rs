//! Dense matrices over a generic scalar, with exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, OrderedField};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: nrows, cols: ncols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self
    where
        T: Zero,
    {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        Matrix::from_fn(n, m, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                T::zero()
            }
        })
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    /// Matrix product. Panics on incompatible shapes.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for matmul");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self[(i, k)].clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    /// The bilinear form `uᵀ M v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        let mv = self.mul_vec(v);
        u.iter().zip(mv).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
    pub det_factor: T,
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn echelon(&self) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = T::one();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best = None;
            let mut best_w = 0.0;
            for r in row..m.rows {
                let w = m[(r, col)].pivot_weight();
                if w > best_w {
                    best_w = w;
                    best = Some(r);
                    if T::is_exact() {
                        break;
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != row {
                m.swap_rows(p, row);
                det = -det;
            }
            let pivot = m[(row, col)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv();
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m[(r, col)].clone();
                if factor.is_negligible() {
                    m[(r, col)] = T::zero();
                    continue;
                }
                for j in col..m.cols {
                    let v = m[(r, j)].clone() - factor.clone() * m[(row, j)].clone();
                    m[(r, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots, det_factor: det }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Dimension of the right kernel `{v : M v = 0}`.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        self.nullspace_with_free().0
    }

    /// Nullspace basis together with its free columns: basis vector `k` is 1
    /// at `free[k]` and 0 at every other free column, so the coordinates of
    /// a kernel vector `v` are `v[free[k]]`.
    pub fn nullspace_with_free(&self) -> (Vec<Vec<T>>, Vec<usize>) {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &p) in ech.pivots.iter().enumerate() {
                    v[p] = -ech.reduced[(r, f)].clone();
                }
                v
            })
            .collect();
        (basis, free)
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let ech = self.echelon();
        if ech.pivots.len() < self.rows {
            Ok(T::zero())
        } else {
            Ok(ech.det_factor)
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(Matrix::from_fn(n, n, |i, j| ech.reduced[(i, j + n)].clone()))
    }
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Sylvester inertia by symmetric elimination (congruence `PᵀAP`).
///
/// Pivots on a nonzero diagonal entry when one exists; otherwise on a 2×2
/// block `[[0, a], [a, 0]]`, which contributes one positive and one
/// negative direction.
pub fn inertia<T: OrderedField>(a: &Matrix<T>) -> Result<Inertia> {
    if !a.is_symmetric() {
        return Err(Error::ShapeMismatch("inertia needs a symmetric matrix".into()));
    }
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..m.rows).collect();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    while !active.is_empty() {
        if let Some(&k) = active.iter().find(|&&k| !m[(k, k)].is_negligible()) {
            let pivot = m[(k, k)].clone();
            if pivot > T::zero() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            active.retain(|&i| i != k);
            let inv = pivot.inv();
            for &i in &active {
                let f = m[(i, k)].clone() * inv.clone();
                for &j in &active {
                    let v = m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
                    m[(i, j)] = v;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(idx, &i)| {
            active[idx + 1..].iter().find(|&&j| !m[(i, j)].is_negligible()).map(|&j| (i, j))
        });
        let Some((p, q)) = pair else {
            out.zero += active.len();
            break;
        };
        // Block [[0, c], [c, 0]] with c != 0; its inverse is [[0, 1/c], [1/c, 0]].
        out.positive += 1;
        out.negative += 1;
        active.retain(|&i| i != p && i != q);
        let cinv = m[(p, q)].inv();
        for &i in &active {
            let (ip, iq) = (m[(i, p)].clone(), m[(i, q)].clone());
            for &j in &active {
                let (pj, qj) = (m[(p, j)].clone(), m[(q, j)].clone());
                let corr = (ip.clone() * qj + iq.clone() * pj) * cinv.clone();
                let v = m[(i, j)].clone() - corr;
                m[(i, j)] = v;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn inverse_of_a2() {
        let g = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(2)]]);
        let inv = g.inverse().unwrap();
        assert_eq!(g.matmul(&inv), Matrix::identity(2));
        assert_eq!(g.determinant().unwrap(), q(3));
    }

    #[test]
    fn singular_inverse_fails() {
        let g = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(g.inverse(), Err(Error::SingularMatrix));
        assert_eq!(g.nullity(), 1);
        let ns = g.nullspace();
        assert_eq!(g.mul_vec(&ns[0]), vec![q(0), q(0)]);
    }

    #[test]
    fn inertia_hyperbolic_and_definite() {
        let u = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(inertia(&u).unwrap().signature(), 0);
        let d = Matrix::from_rows(vec![vec![q(-2), q(1)], vec![q(1), q(-2)]]);
        assert_eq!(inertia(&d).unwrap().signature(), -2);
        let z = Matrix::<BigRational>::zeros(3, 3);
        assert_eq!(inertia(&z).unwrap().zero, 3);
    }

    #[test]
    fn float_nullity_uses_tolerance() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-12]]);
        assert_eq!(m.rank(), 1);
    }
}
