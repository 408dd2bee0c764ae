use rayon::prelude::*;

use super::MetricGroup;
use crate::error::{check_size, Error, Result};
use crate::exactnum::{recognize_eighthroot, EighthRootForm, RootSum};
use crate::linalg::Matrix;
use crate::Cyclo;

/// Largest group for which pairwise `b` values are tabulated.
const PAIR_TABLE_LIMIT: usize = 2048;

struct Tables {
    n_ord: u64,
    size: usize,
    /// `diag[d][x] = Q_dd·q(x)` over the common denominator.
    diag: Vec<Vec<u64>>,
    /// `b[x][y]`, flattened; empty when not tabulated.
    b: Vec<u64>,
    elements: Vec<Vec<i64>>,
}

impl Tables {
    fn b(&self, m: &MetricGroup, x: usize, y: usize) -> u64 {
        if self.b.is_empty() {
            m.b_num(&self.elements[x], &self.elements[y])
        } else {
            self.b[x * self.size + y]
        }
    }
}

/// `Σ_{c ∈ Aⁿ} e(Σ_i Q_ii·q(c_i) + Σ_{i<j} Q_ij·b(c_i, c_j))` for a symmetric
/// integer matrix `Q`.
///
/// Enumerates `Aⁿ` depth-first; each level carries, for every later
/// coordinate, the linear functional contributed by the coordinates already
/// fixed. The first coordinate is split across threads and the exact
/// histograms are summed, so the result does not depend on scheduling.
pub fn quadratic_sum(m: &MetricGroup, q: &Matrix<i64>, limit: u128) -> Result<RootSum> {
    if !q.is_symmetric() {
        return Err(Error::ShapeMismatch("quadratic sum needs a symmetric matrix".into()));
    }
    let n = q.rows();
    let size = m.order();
    let terms = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(size)).unwrap_or(u128::MAX);
    check_size(terms, limit)?;
    let n_ord = m.denominator();
    let mut out = RootSum::new(n_ord);
    if n == 0 {
        out.add_term(0, 1);
        return Ok(out);
    }
    let size = size as usize;
    let elements: Vec<Vec<i64>> = m.group().elements().collect();
    let qv: Vec<u64> = elements.iter().map(|x| m.q_num(x)).collect();
    let modn = |v: i64| v.rem_euclid(n_ord as i64) as u64;
    let diag = (0..n)
        .map(|d| qv.iter().map(|&v| (modn(q[(d, d)]) as u128 * v as u128 % n_ord as u128) as u64).collect())
        .collect();
    let b = if n >= 2 && size <= PAIR_TABLE_LIMIT {
        let mut t = vec![0u64; size * size];
        for x in 0..size {
            for y in 0..=x {
                let v = m.b_num(&elements[x], &elements[y]);
                t[x * size + y] = v;
                t[y * size + x] = v;
            }
        }
        t
    } else {
        Vec::new()
    };
    let tables = Tables { n_ord, size, diag, b, elements };
    let coeff: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| modn(q[(i, j)])).collect()).collect();

    let hists: Vec<Vec<i64>> = (0..size)
        .into_par_iter()
        .map(|c0| {
            let mut hist = vec![0i64; n_ord as usize];
            let mut levels = vec![vec![0u64; n * size]; n + 1];
            if n == 1 {
                hist[tables.diag[0][c0] as usize] += 1;
                return hist;
            }
            push_level(m, &tables, &coeff, &mut levels, 0, c0);
            dfs(m, &tables, &coeff, &mut levels, 1, tables.diag[0][c0], &mut hist);
            hist
        })
        .collect();
    for h in hists {
        for (k, c) in h.into_iter().enumerate() {
            if c != 0 {
                out.add_term(k as u64, c);
            }
        }
    }
    Ok(out)
}

/// Writes level `d + 1` from level `d` after fixing coordinate `d` to `x`.
fn push_level(m: &MetricGroup, t: &Tables, coeff: &[Vec<u64>], levels: &mut [Vec<u64>], d: usize, x: usize) {
    let n = coeff.len();
    let size = t.size;
    let (lower, upper) = levels.split_at_mut(d + 1);
    let cur = &lower[d];
    let next = &mut upper[0];
    for j in d + 1..n {
        let row = &cur[j * size..(j + 1) * size];
        let dst = &mut next[j * size..(j + 1) * size];
        let c = coeff[d][j];
        if c == 0 {
            dst.copy_from_slice(row);
            continue;
        }
        for y in 0..size {
            dst[y] = (row[y] + c * t.b(m, x, y)) % t.n_ord;
        }
    }
}

fn dfs(m: &MetricGroup, t: &Tables, coeff: &[Vec<u64>], levels: &mut [Vec<u64>], d: usize, phase: u64, hist: &mut [i64]) {
    let n = coeff.len();
    let size = t.size;
    if d == n - 1 {
        let lin = &levels[d][d * size..(d + 1) * size];
        for x in 0..size {
            let k = (phase + t.diag[d][x] + lin[x]) % t.n_ord;
            hist[k as usize] += 1;
        }
        return;
    }
    for x in 0..size {
        let k = (phase + t.diag[d][x] + levels[d][d * size + x]) % t.n_ord;
        push_level(m, t, coeff, levels, d, x);
        dfs(m, t, coeff, levels, d + 1, k, hist);
    }
}

/// [`quadratic_sum`] factored over the orthogonal blocks of `Q`: the sum over
/// a block-diagonal form is the product of the block sums.
pub fn quadratic_sum_blockwise(m: &MetricGroup, q: &Matrix<i64>, limit: u128) -> Result<RootSum> {
    let n = q.rows();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if q[(i, j)] != 0 {
                let (a, b) = (root(&mut comp, i), root(&mut comp, j));
                comp[b] = a;
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = root(&mut comp, i);
        blocks.entry(r).or_default().push(i);
    }
    let mut acc = quadratic_sum(m, &Matrix::zeros(0, 0), limit)?;
    for idx in blocks.values() {
        let sub = Matrix::from_fn(idx.len(), idx.len(), |a, b| q[(idx[a], idx[b])]);
        acc = &acc * &quadratic_sum(m, &sub, limit)?;
    }
    Ok(acc)
}

/// `Σ_{x ∈ A} e(q(x))`.
pub fn gauss_sum(m: &MetricGroup) -> Cyclo {
    quadratic_sum(m, &Matrix::from_rows(vec![vec![1]]), u128::MAX)
        .expect("single-variable sum")
        .to_cyclo()
}

/// `σ mod 8` with `Σ e(q) = √|A|·ζ₈^σ`.
pub fn milgram_signature(m: &MetricGroup) -> Result<u8> {
    let g = gauss_sum(m);
    let degenerate = || Error::DegenerateForm(format!("|Gauss sum|² differs from |A| = {}", m.order()));
    let form = recognize_eighthroot(&g).map_err(|_| degenerate())?;
    let order = u64::try_from(m.order()).map_err(|_| degenerate())?;
    let expected = EighthRootForm::sqrt_power(order, 1);
    if form.rational() != expected.rational() || form.radicand() != expected.radicand() || form.half_power() != expected.half_power() {
        return Err(degenerate());
    }
    Ok(form.eighth())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;
    use crate::exactnum::PhaseQZ;
    use num_traits::{One, Zero};

    fn p(n: i64, d: i64) -> PhaseQZ {
        PhaseQZ::new(n, d)
    }

    #[test]
    fn gauss_sum_examples() {
        assert_eq!(gauss_sum(&MetricGroup::trivial()), Cyclo::one());
        let semion = MetricGroup::cyclic(2, p(1, 4)).unwrap();
        assert_eq!(gauss_sum(&semion), Cyclo::one() + Cyclo::root_of_unity(1, 4));
        let anti = MetricGroup::cyclic(2, p(3, 4)).unwrap();
        assert_eq!(gauss_sum(&anti), Cyclo::one() + Cyclo::root_of_unity(3, 4));
    }

    #[test]
    fn milgram_examples() {
        assert_eq!(milgram_signature(&MetricGroup::trivial()).unwrap(), 0);
        let semion = MetricGroup::cyclic(2, p(1, 4)).unwrap();
        let anti = MetricGroup::cyclic(2, p(3, 4)).unwrap();
        assert_eq!(milgram_signature(&semion).unwrap(), 1);
        assert_eq!(milgram_signature(&anti).unwrap(), 7);
        assert_eq!(milgram_signature(&semion.orthogonal_sum(&semion).unwrap()).unwrap(), 2);
        assert_eq!(milgram_signature(&semion.orthogonal_sum(&anti).unwrap()).unwrap(), 0);
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let deg = MetricGroup::new(g, vec![p(1, 4), PhaseQZ::ZERO], vec![vec![PhaseQZ::ZERO]]).unwrap();
        assert!(matches!(milgram_signature(&deg), Err(Error::DegenerateForm(_))));
    }

    /// Direct summation over all tuples, without the incremental tables.
    fn naive(m: &MetricGroup, q: &Matrix<i64>) -> RootSum {
        let n = q.rows();
        let size = m.order() as usize;
        let mut out = RootSum::new(m.denominator());
        let elems: Vec<Vec<i64>> = m.group().elements().collect();
        for idx in 0..size.pow(n as u32) {
            let mut rest = idx;
            let c: Vec<&Vec<i64>> = (0..n)
                .map(|_| {
                    let e = &elems[rest % size];
                    rest /= size;
                    e
                })
                .collect();
            let mut ph = PhaseQZ::ZERO;
            for i in 0..n {
                ph += m.q_eval(c[i]).unwrap() * q[(i, i)];
                for j in i + 1..n {
                    ph += m.b_eval(c[i], c[j]).unwrap() * q[(i, j)];
                }
            }
            out.add_phase(ph);
        }
        out
    }

    #[test]
    fn tabulated_sum_matches_naive() {
        let m = MetricGroup::cyclic(4, p(1, 8)).unwrap();
        let q = Matrix::from_rows(vec![vec![2, -1, 0], vec![-1, 1, 3], vec![0, 3, -2]]);
        assert_eq!(quadratic_sum(&m, &q, u128::MAX).unwrap(), naive(&m, &q));
        let blocks = Matrix::from_rows(vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let a = quadratic_sum(&m, &blocks, u128::MAX).unwrap().to_cyclo::<crate::Rational>();
        let b = quadratic_sum_blockwise(&m, &blocks, u128::MAX).unwrap().to_cyclo::<crate::Rational>();
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn size_limit() {
        let m = MetricGroup::cyclic(4, p(1, 8)).unwrap();
        let q = Matrix::<i64>::identity(5);
        assert!(matches!(quadratic_sum(&m, &q, 1000), Err(Error::TooLarge { .. })));
    }
}
