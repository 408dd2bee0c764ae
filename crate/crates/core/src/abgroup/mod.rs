//! Finite abelian groups in invariant-factor form, homomorphisms, cokernels
//! of integer matrices and the character pairing.

mod snf;

pub use snf::{smith_normal_form, Snf};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::PhaseQZ;
use crate::linalg::Matrix;

/// `Z/d_1 × … × Z/d_r` with `d_1 | d_2 | … | d_r`, all `d_i >= 2`.
///
/// Elements are coordinate vectors with `0 <= x_i < d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidInput(format!("invariant factors must be >= 2: {factors:?}")));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!("invariant factors must form a divisibility chain: {factors:?}")));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup::new(vec![n]).expect("n >= 2")
        }
    }

    /// The group `Π Z/n_i` for arbitrary orders, brought to invariant-factor
    /// form. The returned cokernel data maps old coordinates to new ones.
    pub fn from_orders(orders: &[u64]) -> Result<Cokernel> {
        let n = orders.len();
        let rel = Matrix::from_fn(n, n, |i, j| if i == j { orders[i] as i64 } else { 0 });
        cokernel(&rel)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.factors).all(|(&a, &d)| 0 <= a && (a as u64) < d)
    }

    pub fn check(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!("element of length {} in a group of rank {}", x.len(), self.rank())));
        }
        Ok(())
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.factors).map(|(&a, &d)| a.rem_euclid(d as i64)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).zip(&self.factors).map(|((&a, &b), &d)| (a + b).rem_euclid(d as i64)).collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).zip(&self.factors).map(|((&a, &b), &d)| (a - b).rem_euclid(d as i64)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().map(|a| -a).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &d)| ((k as i128 * a as i128).rem_euclid(d as i128)) as i64)
            .collect()
    }

    /// Mixed-radix index of an element, first coordinate fastest.
    pub fn index_of(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&a, &d) in x.iter().zip(&self.factors).rev() {
            idx = idx * d as usize + a as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Vec<i64> {
        self.factors
            .iter()
            .map(|&d| {
                let a = idx % d as usize;
                idx /= d as usize;
                a as i64
            })
            .collect()
    }

    /// All elements, in the order of [`FinAbGroup::index_of`].
    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order() as usize).map(|i| self.element_at(i))
    }

    /// Generator `e_i`.
    pub fn generator(&self, i: usize) -> Vec<i64> {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    /// Additive order of an element.
    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&a, &d)| num_integer::lcm(acc, d / num_integer::gcd(a as u64, d)))
    }

    pub fn product(&self, other: &FinAbGroup) -> Result<Cokernel> {
        let orders: Vec<u64> = self.factors.iter().chain(&other.factors).copied().collect();
        FinAbGroup::from_orders(&orders)
    }
}

/// `Σ x_i χ_i / d_i mod 1`, the pairing identifying the group with its
/// character group.
pub fn char_pairing(group: &FinAbGroup, x: &[i64], chi: &[i64]) -> Result<PhaseQZ> {
    group.check(x)?;
    group.check(chi)?;
    Ok(x.iter()
        .zip(chi)
        .zip(group.factors())
        .map(|((&a, &c), &d)| PhaseQZ::from_ratio(Ratio::new((a as i128 * c as i128 % d as i128) as i64, d as i64)))
        .sum())
}

/// A homomorphism between finite abelian groups given on generators: column
/// `i` of `matrix` is the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: FinAbGroup,
    pub codomain: FinAbGroup,
    pub matrix: Matrix<i64>,
}

impl GroupHom {
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, matrix: Matrix<i64>) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(Error::ShapeMismatch("homomorphism matrix has the wrong shape".into()));
        }
        let hom = GroupHom { domain, codomain, matrix };
        for (i, &d) in hom.domain.factors().iter().enumerate() {
            let image: Vec<i64> = hom.matrix.column(i).iter().map(|&a| a * d as i64).collect();
            if hom.codomain.reduce(&image).iter().any(|&a| a != 0) {
                return Err(Error::WellDefinednessFailure(format!("generator {i} of order {d} does not map to an element of order dividing {d}")));
            }
        }
        Ok(hom)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let y: Vec<i64> = (0..self.matrix.rows())
            .map(|r| {
                let d = self.codomain.factors()[r] as i128;
                x.iter()
                    .enumerate()
                    .map(|(c, &a)| (self.matrix[(r, c)] as i128 * a as i128).rem_euclid(d))
                    .sum::<i128>()
                    .rem_euclid(d) as i64
            })
            .collect();
        y
    }

    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        GroupHom::new(first.domain.clone(), self.codomain.clone(), self.matrix.matmul(&first.matrix))
    }
}

/// The quotient `Z^r / M·Z^r` of a nonsingular square matrix (relations are
/// the columns of `M`).
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FinAbGroup,
    /// Rows map `x ∈ Z^r` to group coordinates (before reduction).
    pub projection: Matrix<i64>,
    /// `lifts[k] ∈ Z^r` represents the generator `e_k` of the group.
    pub lifts: Vec<Vec<i64>>,
}

impl Cokernel {
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        let y: Vec<i64> = (0..self.projection.rows())
            .map(|r| {
                let d = self.group.factors()[r] as i128;
                x.iter()
                    .enumerate()
                    .map(|(c, &a)| (self.projection[(r, c)] as i128 % d) * a as i128 % d)
                    .sum::<i128>()
                    .rem_euclid(d) as i64
            })
            .collect();
        y
    }

    /// A lift in `Z^r` of a group element.
    pub fn lift(&self, x: &[i64]) -> Vec<i64> {
        let r = self.projection.cols();
        let mut out = vec![0i64; r];
        for (k, &a) in x.iter().enumerate() {
            for (o, &l) in out.iter_mut().zip(&self.lifts[k]) {
                *o += a * l;
            }
        }
        out
    }
}

fn narrow(m: &Matrix<i128>) -> Result<Matrix<i64>> {
    let data = m
        .data()
        .iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::InvalidInput("integer overflow in Smith normal form".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_vec(m.rows(), m.cols(), data))
}

/// Cokernel of a nonsingular square integer matrix; invariant factors equal
/// to 1 are dropped.
pub fn cokernel(m: &Matrix<i64>) -> Result<Cokernel> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("cokernel needs a square matrix".into()));
    }
    let snf = smith_normal_form(&m.map(|&x| x as i128));
    let diag = snf.diagonal();
    if diag.contains(&0) {
        return Err(Error::SingularMatrix);
    }
    let kept: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] > 1).collect();
    let factors: Vec<u64> = kept.iter().map(|&i| diag[i] as u64).collect();
    let u = narrow(&snf.u)?;
    let u_inv = narrow(&snf.u_inv)?;
    let r = m.rows();
    let projection = Matrix::from_fn(kept.len(), r, |k, c| u[(kept[k], c)].rem_euclid(factors[k] as i64));
    let lifts = kept.iter().map(|&i| u_inv.column(i)).collect();
    Ok(Cokernel { group: FinAbGroup::new(factors)?, projection, lifts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        let c = cokernel(&Matrix::from_rows(vec![vec![2]])).unwrap();
        assert_eq!(c.group.factors(), &[2]);
        let u = cokernel(&Matrix::from_rows(vec![vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!(u.group, FinAbGroup::trivial());
        let a2 = cokernel(&Matrix::from_rows(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert_eq!(a2.group.factors(), &[3]);
        assert_eq!(a2.project(&a2.lifts[0]), vec![1]);
        assert!(matches!(cokernel(&Matrix::from_rows(vec![vec![1, 2], vec![2, 4]])), Err(Error::SingularMatrix)));
    }

    #[test]
    fn relations_project_to_zero() {
        let m = Matrix::from_rows(vec![vec![4, 2, 0], vec![2, 6, 2], vec![0, 2, 8]]);
        let c = cokernel(&m).unwrap();
        assert_eq!(c.group.order(), 144);
        for j in 0..3 {
            assert!(c.project(&m.column(j)).iter().all(|&x| x == 0));
        }
        for k in 0..c.group.rank() {
            assert_eq!(c.project(&c.lifts[k]), c.group.generator(k));
        }
    }

    #[test]
    fn pairing_examples() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(char_pairing(&z2, &[0], &[1]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(char_pairing(&z2, &[1], &[1]).unwrap(), PhaseQZ::new(1, 2));
        let z4 = FinAbGroup::cyclic(4);
        assert_eq!(char_pairing(&z4, &[1], &[3]).unwrap(), PhaseQZ::new(3, 4));
        assert!(char_pairing(&z4, &[1, 0], &[3]).is_err());
    }

    #[test]
    fn orders_to_invariant_factors() {
        let c = FinAbGroup::from_orders(&[2, 3]).unwrap();
        assert_eq!(c.group.factors(), &[6]);
        let d = FinAbGroup::from_orders(&[4, 2, 6]).unwrap();
        assert_eq!(d.group.factors(), &[2, 2, 12]);
        assert!(FinAbGroup::new(vec![2, 3]).is_err());
    }

    #[test]
    fn homomorphism_check() {
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let h = GroupHom::new(z4.clone(), z2.clone(), Matrix::from_rows(vec![vec![1]])).unwrap();
        assert_eq!(h.apply(&[3]), vec![1]);
        assert!(GroupHom::new(z2, z4, Matrix::from_rows(vec![vec![1]])).is_err());
    }
}
