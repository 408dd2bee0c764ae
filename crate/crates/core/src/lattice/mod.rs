//! Even lattices, their discriminant forms, finite approximation groups and
//! the explicit line-bundle phase formulas on rational points.

mod phases;
mod tower;

pub use phases::{
    braiding_phase, cocycle_phase_k, commutator_phase_l, default_b, ribbon_theta, s_map, splitting_character,
    RationalPoint,
};
pub use tower::{approximation_tower, center_form, duality_check, ApproxTower, CenterForm, DualityReport, SignMatch};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{inertia, Matrix};
use crate::metric::MetricGroup;

/// A free abelian group `Z^r` with an even symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Matrix<i64>,
}

impl EvenLattice {
    pub fn new(gram: Matrix<i64>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix must be symmetric".into()));
        }
        if (0..gram.rows()).any(|i| gram[(i, i)] % 2 != 0) {
            return Err(Error::InvalidInput("Gram matrix must have even diagonal".into()));
        }
        Ok(EvenLattice { gram })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::ShapeMismatch("Gram matrix must be square".into()));
        }
        Self::new(Matrix::from_rows(rows))
    }

    /// Built-ins: `A1`, `A2`, `E8`, `U` (hyperbolic plane), `A1(-1)`.
    pub fn named(name: &str) -> Result<Self> {
        let rows = match name {
            "A1" => vec![vec![2]],
            "A1(-1)" => vec![vec![-2]],
            "A2" => vec![vec![2, 1], vec![1, 2]],
            "U" => vec![vec![0, 1], vec![1, 0]],
            "E8" => return Ok(Self::e8()),
            _ => return Err(Error::InvalidInput(format!("unknown lattice {name:?}"))),
        };
        Self::from_rows(rows)
    }

    pub const BUILTIN_NAMES: [&'static str; 5] = ["A1", "A2", "E8", "U", "A1(-1)"];

    /// The E8 root lattice (Cartan matrix, Bourbaki labelling).
    pub fn e8() -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let gram = Matrix::from_fn(8, 8, |i, j| {
            if i == j {
                2
            } else if edges.contains(&(i, j)) || edges.contains(&(j, i)) {
                -1
            } else {
                0
            }
        });
        EvenLattice { gram }
    }

    pub fn gram(&self) -> &Matrix<i64> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn negate(&self) -> Self {
        EvenLattice { gram: self.gram.map(|x| -x) }
    }

    pub fn direct_sum(&self, other: &EvenLattice) -> Self {
        EvenLattice { gram: self.gram.direct_sum(&other.gram) }
    }

    fn gram_big(&self) -> Matrix<BigRational> {
        self.gram.map(|&x| BigRational::from_integer(BigInt::from(x)))
    }

    pub fn determinant(&self) -> BigInt {
        if self.rank() == 0 {
            return BigInt::from(1);
        }
        self.gram_big().determinant().expect("square").to_integer()
    }

    /// `|det G|`, the order of the discriminant group.
    pub fn discriminant_order(&self) -> Result<u64> {
        let d = self.determinant();
        if d.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        u64::try_from(d.abs()).map_err(|_| Error::InvalidInput("determinant too large".into()))
    }

    pub fn gram_inverse(&self) -> Result<Matrix<BigRational>> {
        self.gram_big().inverse().map_err(|_| Error::DegenerateLattice)
    }

    pub(crate) fn gram_inverse_small(&self) -> Result<Matrix<Ratio<i128>>> {
        self.gram.map(|&x| Ratio::from_integer(x as i128)).inverse().map_err(|_| Error::DegenerateLattice)
    }
}

/// Signature by exact Sylvester inertia over Q.
pub fn signature(l: &EvenLattice) -> Result<i64> {
    let inert = inertia(&l.gram_big())?;
    if inert.zero > 0 {
        return Err(Error::DegenerateLattice);
    }
    Ok(inert.signature())
}

/// The metric group on `coker G` with `q(m) = ½·mᵀG⁻¹m mod 1`.
pub fn discriminant_form(l: &EvenLattice) -> Result<MetricGroup> {
    let inv = l.gram_inverse()?;
    MetricGroup::from_presentation(l.gram(), &inv)
}

/// A random even lattice of rank `1..=max_rank` with `0 < |det| <= max_det`.
pub fn random_even_lattice<R: Rng + ?Sized>(rng: &mut R, max_rank: usize, max_det: u64) -> EvenLattice {
    loop {
        let r = rng.gen_range(1..=max_rank);
        let mut g = Matrix::zeros(r, r);
        for i in 0..r {
            g[(i, i)] = 2 * rng.gen_range(-3i64..=3);
            for j in i + 1..r {
                let v = rng.gen_range(-3i64..=3);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        let l = EvenLattice { gram: g };
        match l.discriminant_order() {
            Ok(d) if d <= max_det => return l,
            _ => continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PhaseQZ;

    #[test]
    fn signatures() {
        assert_eq!(signature(&EvenLattice::named("A1").unwrap()).unwrap(), 1);
        assert_eq!(signature(&EvenLattice::e8()).unwrap(), 8);
        assert_eq!(signature(&EvenLattice::named("U").unwrap()).unwrap(), 0);
        assert_eq!(signature(&EvenLattice::named("A1(-1)").unwrap()).unwrap(), -1);
        let deg = EvenLattice::from_rows(vec![vec![2, 2], vec![2, 2]]).unwrap();
        assert!(matches!(signature(&deg), Err(Error::DegenerateLattice)));
    }

    #[test]
    fn discriminant_examples() {
        let a1 = discriminant_form(&EvenLattice::named("A1").unwrap()).unwrap();
        assert_eq!(a1.group().factors(), &[2]);
        assert_eq!(a1.q_diag(), &[PhaseQZ::new(1, 4)]);
        let a2 = discriminant_form(&EvenLattice::named("A2").unwrap()).unwrap();
        assert_eq!(a2.group().factors(), &[3]);
        assert_eq!(a2.q_eval(&[1]).unwrap(), PhaseQZ::new(1, 3));
        let e8 = discriminant_form(&EvenLattice::e8()).unwrap();
        assert_eq!(e8.order(), 1);
        assert_eq!(EvenLattice::e8().determinant(), BigInt::from(1));
    }

    #[test]
    fn rejects_odd_or_asymmetric() {
        assert!(EvenLattice::from_rows(vec![vec![1]]).is_err());
        assert!(EvenLattice::from_rows(vec![vec![2, 1], vec![0, 2]]).is_err());
        assert!(EvenLattice::named("D4").is_err());
    }
}
