use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use super::EvenLattice;
use crate::error::{Error, Result};
use crate::exactnum::PhaseQZ;
use crate::linalg::Matrix;

type Q = Ratio<i128>;

/// A rational lift `ξ ∈ Qʳ` of a point of the torus `𝔱/Π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint(pub Vec<Ratio<i64>>);

impl RationalPoint {
    pub fn new(coords: Vec<Ratio<i64>>) -> Self {
        RationalPoint(coords)
    }

    pub fn zero(rank: usize) -> Self {
        RationalPoint(vec![Ratio::zero(); rank])
    }

    pub fn from_fractions(coords: &[(i64, i64)]) -> Self {
        RationalPoint(coords.iter().map(|&(n, d)| Ratio::new(n, d)).collect())
    }

    pub fn from_integers(v: &[i64]) -> Self {
        RationalPoint(v.iter().map(|&a| Ratio::from_integer(a)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn shift(&self, pi: &[i64]) -> RationalPoint {
        RationalPoint(self.0.iter().zip(pi).map(|(a, &b)| a + b).collect())
    }

    pub fn neg(&self) -> RationalPoint {
        RationalPoint(self.0.iter().map(|a| -a).collect())
    }

    fn wide(&self) -> Vec<Q> {
        self.0.iter().map(|a| Q::new(*a.numer() as i128, *a.denom() as i128)).collect()
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        v.serialize(s)
    }
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&a| Q::from_integer(a as i128)).collect()
}

fn check_len(l: &EvenLattice, len: usize) -> Result<()> {
    if len != l.rank() {
        return Err(Error::ShapeMismatch(format!("vector of length {len} for a rank {} lattice", l.rank())));
    }
    Ok(())
}

fn pair(m: &Matrix<i64>, u: &[Q], v: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in v.iter().enumerate() {
            acc += a * b * Q::from_integer(m[(i, j)] as i128);
        }
    }
    acc
}

fn phase(x: Q) -> Result<PhaseQZ> {
    let d = *x.denom();
    let n = x.numer().mod_floor(&d);
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Ok(PhaseQZ::new(n, d)),
        _ => Err(Error::InvalidInput("phase denominator overflows i64".into())),
    }
}

fn half() -> Q {
    Q::new(1, 2)
}

/// The upper-triangular splitting of the Gram matrix: `B_ii = G_ii/2`,
/// `B_ij = G_ij` for `i < j`.
pub fn default_b(l: &EvenLattice) -> Matrix<i64> {
    let g = l.gram();
    Matrix::from_fn(l.rank(), l.rank(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => g[(i, i)] / 2,
        std::cmp::Ordering::Less => g[(i, j)],
        std::cmp::Ordering::Greater => 0,
    })
}

fn check_b(l: &EvenLattice, b: &Matrix<i64>) -> Result<()> {
    let r = l.rank();
    if b.rows() != r || b.cols() != r {
        return Err(Error::ShapeMismatch("B must be square of the lattice rank".into()));
    }
    let g = l.gram();
    if (0..r).any(|i| (0..r).any(|j| b[(i, j)] + b[(j, i)] != g[(i, j)])) {
        return Err(Error::BadSymmetrization);
    }
    Ok(())
}

/// Multiplier `½(B(π,ξ') − B(ξ,π') + B(π,π'))` by which the shift `(π,π')`
/// acts from the fiber over `(ξ,ξ')` to the fiber over `(ξ+π,ξ'+π')`.
pub fn cocycle_phase_k(
    l: &EvenLattice,
    b: &Matrix<i64>,
    x: &RationalPoint,
    y: &RationalPoint,
    pi: &[i64],
    pi2: &[i64],
) -> Result<PhaseQZ> {
    check_b(l, b)?;
    for len in [x.rank(), y.rank(), pi.len(), pi2.len()] {
        check_len(l, len)?;
    }
    let (p, p2) = (ints(pi), ints(pi2));
    let v = pair(b, &p, &y.wide()) - pair(b, &x.wide(), &p2) + pair(b, &p, &p2);
    phase(v * half())
}

/// Multiplier `½(⟨π,ξ'⟩ − ⟨ξ,π'⟩ + ⟨π,π'⟩)` for the commutator bundle.
///
/// Agrees with `K(x,y;π,π') − K(y,x;π',π)` for every admissible `B`.
pub fn commutator_phase_l(l: &EvenLattice, x: &RationalPoint, y: &RationalPoint, pi: &[i64], pi2: &[i64]) -> Result<PhaseQZ> {
    for len in [x.rank(), y.rank(), pi.len(), pi2.len()] {
        check_len(l, len)?;
    }
    let g = l.gram();
    let (p, p2) = (ints(pi), ints(pi2));
    let v = pair(g, &p, &y.wide()) - pair(g, &x.wide(), &p2) + pair(g, &p, &p2);
    phase(v * half())
}

fn g_inv_apply(l: &EvenLattice, lam: &[i64]) -> Result<Vec<Q>> {
    check_len(l, lam.len())?;
    Ok(l.gram_inverse_small()?.mul_vec(&ints(lam)))
}

/// `⟨G⁻¹λ − ξ/2, ξ'⟩`.
pub fn splitting_character(l: &EvenLattice, xi: &RationalPoint, lam: &[i64], xi2: &RationalPoint) -> Result<PhaseQZ> {
    check_len(l, xi.rank())?;
    check_len(l, xi2.rank())?;
    let t = g_inv_apply(l, lam)?;
    let v: Vec<Q> = t.iter().zip(xi.wide()).map(|(a, b)| a - b * half()).collect();
    phase(pair(l.gram(), &v, &xi2.wide()))
}

/// `λ ↦ (G⁻¹λ, λ)`.
pub fn s_map(l: &EvenLattice, lam: &[i64]) -> Result<(RationalPoint, Vec<i64>)> {
    let t = g_inv_apply(l, lam)?;
    let coords = t
        .iter()
        .map(|a| match (i64::try_from(*a.numer()), i64::try_from(*a.denom())) {
            (Ok(n), Ok(d)) => Ok(Ratio::new(n, d)),
            _ => Err(Error::InvalidInput("coordinate overflows i64".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((RationalPoint(coords), lam.to_vec()))
}

/// `−⟨ξ,ξ'⟩/2`.
pub fn braiding_phase(l: &EvenLattice, xi: &RationalPoint, xi2: &RationalPoint) -> Result<PhaseQZ> {
    check_len(l, xi.rank())?;
    check_len(l, xi2.rank())?;
    phase(-pair(l.gram(), &xi.wide(), &xi2.wide()) * half())
}

/// `(‖G⁻¹λ‖² − ‖ξ − G⁻¹λ‖²)/2`.
pub fn ribbon_theta(l: &EvenLattice, xi: &RationalPoint, lam: &[i64]) -> Result<PhaseQZ> {
    check_len(l, xi.rank())?;
    let t = g_inv_apply(l, lam)?;
    let d: Vec<Q> = xi.wide().iter().zip(&t).map(|(a, b)| a - b).collect();
    let g = l.gram();
    phase((pair(g, &t, &t) - pair(g, &d, &d)) * half())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> EvenLattice {
        EvenLattice::named("A1").unwrap()
    }

    fn pt(n: i64, d: i64) -> RationalPoint {
        RationalPoint::from_fractions(&[(n, d)])
    }

    #[test]
    fn k_examples() {
        let l = a1();
        let b = Matrix::from_rows(vec![vec![1]]);
        let z = pt(0, 1);
        assert_eq!(cocycle_phase_k(&l, &b, &pt(1, 3), &pt(1, 5), &[0], &[0]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(cocycle_phase_k(&l, &b, &z, &z, &[1], &[1]).unwrap(), PhaseQZ::new(1, 2));
        assert_eq!(cocycle_phase_k(&l, &b, &pt(1, 2), &z, &[0], &[1]).unwrap(), PhaseQZ::new(3, 4));
        let bad = Matrix::from_rows(vec![vec![2]]);
        assert!(matches!(cocycle_phase_k(&l, &bad, &z, &z, &[0], &[0]), Err(Error::BadSymmetrization)));
    }

    #[test]
    fn l_examples() {
        let l = a1();
        let z = pt(0, 1);
        assert_eq!(commutator_phase_l(&l, &z, &z, &[0], &[0]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(commutator_phase_l(&l, &z, &z, &[1], &[1]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(commutator_phase_l(&l, &z, &pt(1, 2), &[1], &[0]).unwrap(), PhaseQZ::new(1, 2));
    }

    #[test]
    fn l_is_antisymmetrized_k() {
        let l = EvenLattice::named("A2").unwrap();
        let b0 = default_b(&l);
        let b1 = Matrix::from_rows(vec![vec![1, 3], vec![-2, 1]]);
        let x = RationalPoint::from_fractions(&[(1, 3), (-2, 5)]);
        let y = RationalPoint::from_fractions(&[(3, 4), (1, 6)]);
        let (p, p2) = ([1, -2], [3, 1]);
        let lp = commutator_phase_l(&l, &x, &y, &p, &p2).unwrap();
        for b in [&b0, &b1] {
            let kxy = cocycle_phase_k(&l, b, &x, &y, &p, &p2).unwrap();
            let kyx = cocycle_phase_k(&l, b, &y, &x, &p2, &p).unwrap();
            assert_eq!(lp, kxy - kyx);
            // The opposite orientation gives the inverse multiplier.
            assert_eq!(kyx - kxy, -lp);
        }
        assert_ne!(lp, -lp);
    }

    #[test]
    fn splitting_examples() {
        let l = a1();
        let z = pt(0, 1);
        assert_eq!(splitting_character(&l, &pt(1, 7), &[3], &z).unwrap(), PhaseQZ::ZERO);
        assert_eq!(splitting_character(&l, &z, &[1], &pt(1, 1)).unwrap(), PhaseQZ::ZERO);
        assert_eq!(splitting_character(&l, &pt(1, 2), &[0], &pt(1, 2)).unwrap(), PhaseQZ::new(3, 4));
    }

    #[test]
    fn s_map_examples() {
        assert_eq!(s_map(&a1(), &[0]).unwrap(), (pt(0, 1), vec![0]));
        assert_eq!(s_map(&a1(), &[1]).unwrap(), (pt(1, 2), vec![1]));
        let a2 = EvenLattice::named("A2").unwrap();
        assert_eq!(s_map(&a2, &[1, 0]).unwrap().0, RationalPoint::from_fractions(&[(2, 3), (-1, 3)]));
    }

    #[test]
    fn braiding_and_ribbon_examples() {
        let l = a1();
        assert_eq!(braiding_phase(&l, &pt(0, 1), &pt(1, 3)).unwrap(), PhaseQZ::ZERO);
        assert_eq!(braiding_phase(&l, &pt(1, 2), &pt(1, 2)).unwrap(), PhaseQZ::new(3, 4));
        assert_eq!(braiding_phase(&l, &pt(1, 1), &pt(1, 2)).unwrap(), PhaseQZ::new(1, 2));
        assert_eq!(ribbon_theta(&l, &pt(0, 1), &[0]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(ribbon_theta(&l, &pt(0, 1), &[1]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(ribbon_theta(&l, &pt(1, 2), &[0]).unwrap(), PhaseQZ::new(3, 4));
    }

    #[test]
    fn shape_errors() {
        let z2 = RationalPoint::zero(2);
        assert!(matches!(braiding_phase(&a1(), &z2, &z2), Err(Error::ShapeMismatch(_))));
    }
}
