use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;

use crate::linalg::Matrix;

/// Smith normal form `D = U·M·V` with `U`, `V` unimodular.
///
/// `u_inv` is `U⁻¹`, tracked alongside so that generator lifts of a
/// cokernel can be read off without a second inversion.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Clone> Snf<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: Integer + Signed + Clone> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row_i += k·row_t
    fn add_row(&mut self, i: usize, t: usize, k: T) {
        for j in 0..self.a.cols() {
            let v = self.a[(i, j)].clone() + k.clone() * self.a[(t, j)].clone();
            self.a[(i, j)] = v;
        }
        for j in 0..self.u.cols() {
            let v = self.u[(i, j)].clone() + k.clone() * self.u[(t, j)].clone();
            self.u[(i, j)] = v;
        }
        // U' = E·U, so U'^{-1} = U^{-1}·E^{-1}: col_t -= k·col_i.
        for r in 0..self.u_inv.rows() {
            let v = self.u_inv[(r, t)].clone() - k.clone() * self.u_inv[(r, i)].clone();
            self.u_inv[(r, t)] = v;
        }
    }

    /// col_j += k·col_t
    fn add_col(&mut self, j: usize, t: usize, k: T) {
        for i in 0..self.a.rows() {
            let v = self.a[(i, j)].clone() + k.clone() * self.a[(i, t)].clone();
            self.a[(i, j)] = v;
        }
        for i in 0..self.v.rows() {
            let v = self.v[(i, j)].clone() + k.clone() * self.v[(i, t)].clone();
            self.v[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            self.a[(i, j)] = -self.a[(i, j)].clone();
        }
        for j in 0..self.u.cols() {
            self.u[(i, j)] = -self.u[(i, j)].clone();
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a[(i, j)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|b| x < b.2) {
                    best = Some((i, j, x));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form over the integers, pivoting on the entry of least
/// absolute value. The diagonal satisfies `d_i | d_{i+1}` with `d_i >= 0`.
pub fn smith_normal_form<T>(m: &Matrix<T>) -> Snf<T>
where
    T: Integer + Signed + Clone + Debug,
{
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = w.min_entry(t) {
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_row(i, t, -q);
                }
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_col(j, t, -q);
                }
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let p = w.a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, T::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    Snf { u: w.u, u_inv: w.u_inv, d: w.a, v: w.v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    fn check(a: &Matrix<i64>) -> Vec<i64> {
        let s = smith_normal_form(a);
        assert_eq!(s.u.matmul(a).matmul(&s.v), s.d);
        assert_eq!(s.u.matmul(&s.u_inv), Matrix::identity(a.rows()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && (w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)), "{diag:?}");
        }
        diag
    }

    #[test]
    fn small_examples() {
        assert_eq!(check(&m(vec![vec![1, 0], vec![0, 1]])), vec![1, 1]);
        assert_eq!(check(&m(vec![vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert_eq!(check(&m(vec![vec![0, 0], vec![0, 0]])), vec![0, 0]);
        assert_eq!(check(&m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), vec![2, 6, 12]);
        assert_eq!(check(&m(vec![vec![4, 6]])), vec![2]);
    }
}
