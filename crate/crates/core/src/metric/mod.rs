//! Metric groups: finite abelian groups with a Q/Z-valued quadratic form.

mod enumerate;
mod gauss;
mod heisenberg;
mod subgroup;

pub use enumerate::{enumerate_metric_groups, random_metric_group};
pub use gauss::{gauss_sum, milgram_signature, quadratic_sum, quadratic_sum_blockwise};
pub use heisenberg::{
    heisenberg_center_dim, heisenberg_center_dim_dense, heisenberg_summary, schrodinger_check, HeisenbergSummary,
    EXACT_CENTER_ORDER_LIMIT, HEISENBERG_LIMIT,
};
pub use subgroup::{commutant_subgroup, Subgroup};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::abgroup::{cokernel, FinAbGroup};
use crate::error::{Error, Result};
use crate::exactnum::PhaseQZ;
use crate::linalg::Matrix;

/// Groups up to this order are checked for nondegeneracy by computing the
/// radical exhaustively; larger ones use the Gauss sum magnitude.
pub const EXHAUSTIVE_RADICAL_LIMIT: u128 = 10_000;

/// A finite abelian group with a homogeneous quadratic form `q: A → Q/Z`,
/// stored on generators: `q(e_i)` and `b(e_i, e_j)` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGroup {
    group: FinAbGroup,
    q_diag: Vec<PhaseQZ>,
    b: Vec<Vec<PhaseQZ>>,
    denom: u64,
    qn: Vec<i64>,
    bn: Vec<Vec<i64>>,
}

impl MetricGroup {
    /// `b_off[i]` lists `b(e_i, e_j)` for `j = i+1, …, r-1`; missing trailing
    /// rows are read as empty.
    pub fn new(group: FinAbGroup, q_diag: Vec<PhaseQZ>, b_off: Vec<Vec<PhaseQZ>>) -> Result<Self> {
        let r = group.rank();
        if q_diag.len() != r {
            return Err(Error::ShapeMismatch(format!("q_diag has {} entries for a group of rank {r}", q_diag.len())));
        }
        if b_off.len() > r {
            return Err(Error::ShapeMismatch(format!("b_off has {} rows for a group of rank {r}", b_off.len())));
        }
        let mut b = vec![vec![PhaseQZ::ZERO; r]; r];
        for (i, row) in b_off.iter().enumerate() {
            if row.len() != r - i - 1 {
                return Err(Error::ShapeMismatch(format!("b_off row {i} has {} entries, expected {}", row.len(), r - i - 1)));
            }
            for (k, &v) in row.iter().enumerate() {
                b[i][i + 1 + k] = v;
                b[i + 1 + k][i] = v;
            }
        }
        for i in 0..r {
            b[i][i] = q_diag[i] * 2;
        }
        Self::from_parts(group, q_diag, b)
    }

    /// Builds from `q(e_i)` and a symmetric matrix of `b(e_i, e_j)` whose
    /// diagonal must equal `2·q(e_i)`.
    pub fn from_parts(group: FinAbGroup, q_diag: Vec<PhaseQZ>, b: Vec<Vec<PhaseQZ>>) -> Result<Self> {
        let r = group.rank();
        let d = group.factors();
        for i in 0..r {
            if b[i][i] != q_diag[i] * 2 {
                return Err(Error::InvalidInput(format!("b(e_{i}, e_{i}) must equal 2·q(e_{i})")));
            }
            let di = d[i] as i64;
            if !(q_diag[i] * (di * di)).is_zero() || !(q_diag[i] * (2 * di)).is_zero() {
                return Err(Error::WellDefinednessFailure(format!(
                    "q(e_{i}) = {} is not well defined on Z/{di}",
                    q_diag[i]
                )));
            }
            for j in 0..r {
                if b[i][j] != b[j][i] {
                    return Err(Error::InvalidInput("b must be symmetric".into()));
                }
                if i != j && (!(b[i][j] * di).is_zero() || !(b[i][j] * d[j] as i64).is_zero()) {
                    return Err(Error::WellDefinednessFailure(format!(
                        "b(e_{i}, e_{j}) = {} is not well defined on Z/{di} × Z/{}",
                        b[i][j], d[j]
                    )));
                }
            }
        }
        let denom = q_diag
            .iter()
            .chain(b.iter().flatten())
            .fold(1u64, |acc, p| acc.lcm(&(p.denom() as u64)));
        let qn = q_diag.iter().map(|p| p.over(denom) as i64).collect();
        let bn = b.iter().map(|row| row.iter().map(|p| p.over(denom) as i64).collect()).collect();
        Ok(MetricGroup { group, q_diag, b, denom, qn, bn })
    }

    pub fn trivial() -> Self {
        MetricGroup::new(FinAbGroup::trivial(), vec![], vec![]).expect("trivial metric group")
    }

    /// `Z/n` with `q(1) = k/m`.
    pub fn cyclic(n: u64, q: PhaseQZ) -> Result<Self> {
        let group = FinAbGroup::cyclic(n);
        if n == 1 {
            return Ok(Self::trivial());
        }
        MetricGroup::new(group, vec![q], vec![])
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    pub fn q_diag(&self) -> &[PhaseQZ] {
        &self.q_diag
    }

    /// `b(e_i, e_j)` for all `i, j`.
    pub fn b_matrix(&self) -> &[Vec<PhaseQZ>] {
        &self.b
    }

    /// Upper-triangular rows as accepted by [`MetricGroup::new`].
    pub fn b_off(&self) -> Vec<Vec<PhaseQZ>> {
        let r = self.group.rank();
        (0..r).map(|i| self.b[i][i + 1..].to_vec()).collect()
    }

    /// Common denominator `N` of all generator data; every value of `q` and
    /// `b` lies in `(1/N)Z/Z`.
    pub fn denominator(&self) -> u64 {
        self.denom
    }

    /// Numerator of `q(x)` over [`MetricGroup::denominator`].
    pub fn q_num(&self, x: &[i64]) -> u64 {
        let n = self.denom as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            let xi = x[i] as i128;
            if xi == 0 {
                continue;
            }
            acc += (xi * xi % n) * self.qn[i] as i128;
            for j in i + 1..x.len() {
                acc += (xi * x[j] as i128 % n) * self.bn[i][j] as i128;
            }
            acc %= n;
        }
        acc.rem_euclid(n) as u64
    }

    /// Numerator of `b(x, y)` over [`MetricGroup::denominator`].
    pub fn b_num(&self, x: &[i64], y: &[i64]) -> u64 {
        let n = self.denom as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                acc += (x[i] as i128 * y[j] as i128 % n) * self.bn[i][j] as i128;
            }
            acc %= n;
        }
        acc.rem_euclid(n) as u64
    }

    fn phase(&self, num: u64) -> PhaseQZ {
        PhaseQZ::new(num as i64, self.denom as i64)
    }

    pub fn q_eval(&self, x: &[i64]) -> Result<PhaseQZ> {
        self.group.check(x)?;
        Ok(self.phase(self.q_num(x)))
    }

    pub fn b_eval(&self, x: &[i64], y: &[i64]) -> Result<PhaseQZ> {
        self.group.check(x)?;
        self.group.check(y)?;
        Ok(self.phase(self.b_num(x, y)))
    }

    /// Elements `x` with `b(x, ·) ≡ 0`.
    pub fn radical(&self) -> Vec<Vec<i64>> {
        let gens: Vec<Vec<i64>> = (0..self.group.rank()).map(|i| self.group.generator(i)).collect();
        self.group
            .elements()
            .filter(|x| gens.iter().all(|g| self.b_num(x, g) == 0))
            .collect()
    }

    /// Nondegeneracy of `b`: exhaustive radical for small groups, the
    /// Gauss sum magnitude `|Σ e(q)|² = |A|` otherwise.
    pub fn is_nondegenerate(&self) -> bool {
        if self.order() <= EXHAUSTIVE_RADICAL_LIMIT {
            self.radical().len() == 1
        } else {
            let g = gauss_sum(self);
            let norm = (g.clone() * g.conj()).as_rational();
            norm == Some(BigRational::from_integer(BigInt::from(self.order())))
        }
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::DegenerateForm(format!("b has a nontrivial radical on {:?}", self.group.factors())))
        }
    }

    /// A rational symmetric `S` with `q(v) ≡ ½·vᵀSv` on integer lifts of
    /// coordinates.
    pub fn quadratic_lift(&self) -> Matrix<BigRational> {
        let r = self.group.rank();
        let lift = |p: PhaseQZ| BigRational::new(BigInt::from(p.numer()), BigInt::from(p.denom()));
        Matrix::from_fn(r, r, |i, j| lift(if i == j { self.q_diag[i] } else { self.b[i][j] }) * BigRational::from_integer(BigInt::from(if i == j { 2 } else { 1 })))
    }

    /// The metric group on `Z^r / R·Z^r` (relations are the columns of `R`)
    /// with `q(v) = ½·vᵀSv mod 1` on lifts.
    ///
    /// Fails with `WellDefinednessFailure` unless `q(ρ) ∈ Z` and `S·ρ ∈ Z^r`
    /// for every relation column `ρ`.
    pub fn from_presentation(relations: &Matrix<i64>, form: &Matrix<BigRational>) -> Result<Self> {
        let r = relations.rows();
        if form.rows() != r || form.cols() != r || !form.is_symmetric() {
            return Err(Error::ShapeMismatch("form must be symmetric of the relation size".into()));
        }
        let big = |v: &[i64]| -> Vec<BigRational> { v.iter().map(|&a| BigRational::from_integer(a.into())).collect() };
        let half = BigRational::new(1.into(), 2.into());
        for c in 0..relations.cols() {
            let rho = big(&relations.column(c));
            let q = form.bilinear(&rho, &rho) * half.clone();
            let s_rho = form.mul_vec(&rho);
            if !q.is_integer() || s_rho.iter().any(|x| !x.is_integer()) {
                return Err(Error::WellDefinednessFailure(format!("form does not descend along relation {c}")));
            }
        }
        let coker = cokernel(relations)?;
        let k = coker.group.rank();
        let lifts: Vec<Vec<BigRational>> = coker.lifts.iter().map(|l| big(l)).collect();
        let to_phase = |x: BigRational| -> Result<PhaseQZ> {
            let d = x.denom().clone();
            let n = x.numer().mod_floor(&d);
            let (n, d) = (n.to_i64(), d.to_i64());
            match (n, d) {
                (Some(n), Some(d)) => Ok(PhaseQZ::from_ratio(Ratio::new(n, d))),
                _ => Err(Error::InvalidInput("phase denominator overflows i64".into())),
            }
        };
        let mut q_diag = Vec::with_capacity(k);
        let mut b = vec![vec![PhaseQZ::ZERO; k]; k];
        for i in 0..k {
            q_diag.push(to_phase(form.bilinear(&lifts[i], &lifts[i]) * half.clone())?);
            for j in 0..k {
                b[i][j] = to_phase(form.bilinear(&lifts[i], &lifts[j]))?;
            }
        }
        MetricGroup::from_parts(coker.group, q_diag, b)
    }

    /// `(A₁ ⊕ A₂, q₁ + q₂)`, re-presented in invariant-factor form.
    pub fn orthogonal_sum(&self, other: &MetricGroup) -> Result<MetricGroup> {
        let orders: Vec<i64> = self.group.factors().iter().chain(other.group.factors()).map(|&d| d as i64).collect();
        let n = orders.len();
        let rel = Matrix::from_fn(n, n, |i, j| if i == j { orders[i] } else { 0 });
        let form = self.quadratic_lift().direct_sum(&other.quadratic_lift());
        MetricGroup::from_presentation(&rel, &form)
    }

    /// Exhaustive isometry test: looks for images of the generators of
    /// `self` in `other` preserving orders, `q` and `b`, spanning `other`.
    pub fn is_isometric(&self, other: &MetricGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let r = self.group.rank();
        let targets: Vec<Vec<i64>> = other.group.elements().collect();
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        self.iso_search(other, &targets, &mut chosen, r)
    }

    fn iso_search(&self, other: &MetricGroup, targets: &[Vec<i64>], chosen: &mut Vec<Vec<i64>>, r: usize) -> bool {
        let i = chosen.len();
        if i == r {
            let span = subgroup::span(&other.group, chosen);
            return span.len() as u128 == other.order();
        }
        let di = self.group.factors()[i];
        for y in targets {
            if other.group.element_order(y) != di {
                continue;
            }
            if other.q_eval(y).unwrap() != self.q_diag[i] {
                continue;
            }
            if (0..i).any(|j| other.b_eval(&chosen[j], y).unwrap() != self.b[j][i]) {
                continue;
            }
            chosen.push(y.clone());
            if self.iso_search(other, targets, chosen, r) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// The same group with `q` replaced by `-q`.
    pub fn negate(&self) -> MetricGroup {
        let q = self.q_diag.iter().map(|&p| -p).collect();
        let b = self.b.iter().map(|row| row.iter().map(|&p| -p).collect()).collect();
        MetricGroup::from_parts(self.group.clone(), q, b).expect("negation preserves well-definedness")
    }
}

impl Serialize for MetricGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("factors", self.group.factors())?;
        map.serialize_entry("q_diag", &self.q_diag)?;
        map.serialize_entry("b_off", &self.b_off())?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> PhaseQZ {
        PhaseQZ::new(n, d)
    }

    #[test]
    fn evaluation_examples() {
        let m = MetricGroup::cyclic(2, p(1, 4)).unwrap();
        assert_eq!(m.q_eval(&[0]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(m.q_eval(&[1]).unwrap(), p(1, 4));
        assert_eq!(m.b_eval(&[1], &[1]).unwrap(), p(1, 2));
        assert_eq!(m.b_eval(&[1], &[0]).unwrap(), PhaseQZ::ZERO);
        let m4 = MetricGroup::cyclic(4, p(1, 8)).unwrap();
        assert_eq!(m4.q_eval(&[2]).unwrap(), p(1, 2));
        let m3 = MetricGroup::cyclic(3, p(1, 3)).unwrap();
        assert_eq!(m3.b_eval(&[1], &[2]).unwrap(), p(1, 3));
        assert!(m3.q_eval(&[1, 1]).is_err());
    }

    #[test]
    fn ill_defined_forms_are_rejected() {
        assert!(matches!(MetricGroup::cyclic(3, p(1, 9)), Err(Error::WellDefinednessFailure(_))));
        assert!(matches!(MetricGroup::cyclic(2, p(1, 8)), Err(Error::WellDefinednessFailure(_))));
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        assert!(MetricGroup::new(g, vec![PhaseQZ::ZERO; 2], vec![vec![p(1, 4)]]).is_err());
    }

    #[test]
    fn radical_and_nondegeneracy() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let pairing = MetricGroup::new(g.clone(), vec![PhaseQZ::ZERO; 2], vec![vec![p(1, 2)]]).unwrap();
        assert!(pairing.is_nondegenerate());
        let degenerate = MetricGroup::new(g, vec![p(1, 4), PhaseQZ::ZERO], vec![vec![PhaseQZ::ZERO]]).unwrap();
        assert_eq!(degenerate.radical(), vec![vec![0, 0], vec![0, 1]]);
        assert!(degenerate.require_nondegenerate().is_err());
    }

    #[test]
    fn orthogonal_sum_recombines_factors() {
        let a = MetricGroup::cyclic(2, p(1, 4)).unwrap();
        let b = MetricGroup::cyclic(3, p(1, 3)).unwrap();
        let s = a.orthogonal_sum(&b).unwrap();
        assert_eq!(s.group().factors(), &[6]);
        assert!(s.is_nondegenerate());
        let mut values: Vec<PhaseQZ> = s.group().elements().map(|x| s.q_eval(&x).unwrap()).collect();
        values.sort();
        let mut expected: Vec<PhaseQZ> = [0, 1].iter().flat_map(|&u| [0, 1, 2].map(move |v| p(u, 4) + p(v * v, 3))).collect();
        expected.sort();
        assert_eq!(values, expected);
        assert_eq!(a.orthogonal_sum(&MetricGroup::trivial()).unwrap(), a);
    }

    #[test]
    fn isometry_search() {
        let a = MetricGroup::cyclic(3, p(1, 3)).unwrap();
        let b = MetricGroup::cyclic(3, p(2, 3)).unwrap();
        assert!(!a.is_isometric(&b));
        let c = MetricGroup::cyclic(5, p(1, 5)).unwrap();
        let d = MetricGroup::cyclic(5, p(4, 5)).unwrap();
        assert!(c.is_isometric(&d));
    }
}
