//! The invertible 4-dimensional theory of a metric group on closed oriented
//! 4-manifolds: the finite sum over gerbe classes and its closed form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{check_size, Error, Result};
use crate::exactnum::{EighthRootForm, PhaseQZ};
use crate::groupoid::PiTower;
use crate::lattice::EvenLattice;
use crate::linalg::{inertia, Matrix};
use crate::metric::{milgram_signature, quadratic_sum, quadratic_sum_blockwise, MetricGroup};
use crate::Cyclo;

/// Largest `|A|^{b₂}` summed term by term.
pub const PARTITION_LIMIT: u128 = 100_000_000;

/// Largest number of components listed by [`gerbe_pi_tower`].
pub const TOWER_LIMIT: u128 = 1_000_000;

/// A closed oriented 4-manifold with torsion-free cohomology, described by
/// `b₁` and a unimodular intersection form on `H²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourManifoldSpec {
    pub name: Option<String>,
    pub b1: u32,
    #[serde(serialize_with = "rows")]
    pub intersection: Matrix<i64>,
}

fn rows<S: serde::Serializer>(m: &Matrix<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_rows().serialize(s)
}

fn hyperbolic() -> Matrix<i64> {
    Matrix::from_rows(vec![vec![0, 1], vec![1, 0]])
}

impl FourManifoldSpec {
    pub fn new(name: Option<String>, b1: u32, intersection: Matrix<i64>) -> Result<Self> {
        if !intersection.is_symmetric() {
            return Err(Error::ShapeMismatch("intersection form must be symmetric".into()));
        }
        if intersection.rows() > 0 {
            let det = intersection.map(|&x| BigRational::from_integer(BigInt::from(x))).determinant()?;
            if det.abs() != BigRational::from_integer(BigInt::from(1)) {
                return Err(Error::InvalidInput(format!("intersection form has determinant {det}, not ±1")));
            }
        }
        Ok(FourManifoldSpec { name, b1, intersection })
    }

    /// `S4`, `CP2`, `CP2bar`, `S2xS2`, `T4`, `K3`.
    pub fn named(name: &str) -> Result<Self> {
        let (b1, q) = match name {
            "S4" => (0, Matrix::zeros(0, 0)),
            "CP2" => (0, Matrix::from_rows(vec![vec![1]])),
            "CP2bar" => (0, Matrix::from_rows(vec![vec![-1]])),
            "S2xS2" => (0, hyperbolic()),
            "T4" => (4, hyperbolic().direct_sum(&hyperbolic()).direct_sum(&hyperbolic())),
            "K3" => {
                let e8m = EvenLattice::e8().negate().gram().clone();
                let h3 = hyperbolic().direct_sum(&hyperbolic()).direct_sum(&hyperbolic());
                (0, e8m.direct_sum(&e8m).direct_sum(&h3))
            }
            _ => return Err(Error::InvalidInput(format!("unknown 4-manifold {name:?}"))),
        };
        Ok(FourManifoldSpec { name: Some(name.to_string()), b1, intersection: q })
    }

    pub const CATALOG: [&'static str; 6] = ["S4", "CP2", "CP2bar", "S2xS2", "T4", "K3"];

    pub fn b2(&self) -> usize {
        self.intersection.rows()
    }

    /// `2 − 2b₁ + b₂`.
    pub fn euler(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2() as i64
    }

    pub fn signature(&self) -> i64 {
        if self.b2() == 0 {
            return 0;
        }
        inertia(&self.intersection.map(|&x| BigRational::from_integer(BigInt::from(x))))
            .expect("symmetric")
            .signature()
    }

    pub fn connected_sum(&self, other: &Self) -> Self {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}#{b}")),
            _ => None,
        };
        FourManifoldSpec { name, b1: self.b1 + other.b1, intersection: self.intersection.direct_sum(&other.intersection) }
    }

    pub fn reversed(&self) -> Self {
        FourManifoldSpec {
            name: self.name.as_ref().map(|n| format!("-{n}")),
            b1: self.b1,
            intersection: self.intersection.map(|x| -x),
        }
    }
}

/// `Σ_i Q_ii q(c_i) + Σ_{i<j} Q_ij b(c_i, c_j)` for `c ∈ A^{b₂}`.
pub fn q_x_eval(m: &MetricGroup, x: &FourManifoldSpec, c: &[Vec<i64>]) -> Result<PhaseQZ> {
    if c.len() != x.b2() {
        return Err(Error::ShapeMismatch(format!("gerbe field needs {} entries", x.b2())));
    }
    let q = &x.intersection;
    let mut total = PhaseQZ::ZERO;
    for i in 0..c.len() {
        total += m.q_eval(&c[i])? * q[(i, i)];
        for j in i + 1..c.len() {
            total += m.b_eval(&c[i], &c[j])? * q[(i, j)];
        }
    }
    Ok(total)
}

fn prefactor(m: &MetricGroup, x: &FourManifoldSpec) -> Result<Cyclo> {
    let a = BigRational::from_integer(BigInt::from(m.order()));
    let p = a.clone() / num_traits::pow(a, x.b1 as usize);
    Ok(Cyclo::from_scalar(p))
}

/// `(#H⁰ / #H¹)·Σ_{c ∈ H²(X; A)} e(q_X(c))` with `#Hⁱ = |A|^{b_i}`, summed
/// over every gerbe class.
pub fn partition_sum(m: &MetricGroup, x: &FourManifoldSpec) -> Result<Cyclo> {
    let sum = quadratic_sum(m, &x.intersection, PARTITION_LIMIT)?;
    Ok(prefactor(m, x)? * sum.to_cyclo())
}

/// [`partition_sum`] with the sum factored over orthogonal blocks of the
/// intersection form.
pub fn partition_sum_blockwise(m: &MetricGroup, x: &FourManifoldSpec) -> Result<Cyclo> {
    let sum = quadratic_sum_blockwise(m, &x.intersection, PARTITION_LIMIT)?;
    Ok(prefactor(m, x)? * sum.to_cyclo())
}

/// `(√|A|)^{χ(X)}·ζ₈^{σ(A)·σ(X)}`.
pub fn partition_closed(m: &MetricGroup, x: &FourManifoldSpec) -> Result<EighthRootForm> {
    m.require_nondegenerate()?;
    let sigma = milgram_signature(m)? as i64;
    let order = u64::try_from(m.order()).map_err(|_| Error::InvalidInput("group too large".into()))?;
    Ok(EighthRootForm::sqrt_power(order, x.euler()).mul(&EighthRootForm::zeta8(sigma * x.signature())))
}

/// Homotopy orders of `Map(X, B²A)`: one component per class in `H²(X; A)`,
/// each with `π₁ = H¹(X; A)` and `π₂ = H⁰(X; A)`.
pub fn gerbe_pi_tower(order: u64, x: &FourManifoldSpec) -> Result<PiTower> {
    let comps = (order as u128).checked_pow(x.b2() as u32).unwrap_or(u128::MAX);
    check_size(comps, TOWER_LIMIT)?;
    let pi1 = order
        .checked_pow(x.b1)
        .ok_or_else(|| Error::InvalidInput("H¹ too large".into()))?;
    PiTower::new(vec![vec![pi1, order]; comps as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groupoid_cardinality;
    use num_traits::One;

    fn semion() -> MetricGroup {
        MetricGroup::cyclic(2, PhaseQZ::new(1, 4)).unwrap()
    }

    #[test]
    fn catalog_invariants() {
        let expect = [("S4", 0, 2), ("CP2", 1, 3), ("CP2bar", -1, 3), ("S2xS2", 0, 4), ("T4", 0, 0), ("K3", -16, 24)];
        for (name, sign, euler) in expect {
            let x = FourManifoldSpec::named(name).unwrap();
            assert_eq!((x.signature(), x.euler()), (sign, euler), "{name}");
            assert!(FourManifoldSpec::new(None, x.b1, x.intersection.clone()).is_ok());
        }
        assert!(FourManifoldSpec::new(None, 0, Matrix::from_rows(vec![vec![2]])).is_err());
    }

    #[test]
    fn q_x_examples() {
        let m = semion();
        let cp2 = FourManifoldSpec::named("CP2").unwrap();
        assert_eq!(q_x_eval(&m, &cp2, &[vec![0]]).unwrap(), PhaseQZ::ZERO);
        assert_eq!(q_x_eval(&m, &cp2, &[vec![1]]).unwrap(), PhaseQZ::new(1, 4));
        let s2s2 = FourManifoldSpec::named("S2xS2").unwrap();
        assert_eq!(q_x_eval(&m, &s2s2, &[vec![1], vec![1]]).unwrap(), PhaseQZ::new(1, 2));
        assert!(q_x_eval(&m, &s2s2, &[vec![1]]).is_err());
    }

    #[test]
    fn sum_examples() {
        let m = semion();
        let two = Cyclo::from_int(2);
        assert_eq!(partition_sum(&m, &FourManifoldSpec::named("S4").unwrap()).unwrap(), two.clone());
        let cp2 = partition_sum(&m, &FourManifoldSpec::named("CP2").unwrap()).unwrap();
        assert_eq!(cp2, two.clone() * (Cyclo::one() + Cyclo::root_of_unity(1, 4)));
        assert_eq!(partition_sum(&m, &FourManifoldSpec::named("S2xS2").unwrap()).unwrap(), Cyclo::from_int(4));
    }

    #[test]
    fn closed_examples() {
        let m = semion();
        assert_eq!(partition_closed(&m, &FourManifoldSpec::named("S4").unwrap()).unwrap().to_cyclo(), Cyclo::from_int(2));
        let cp2 = partition_closed(&m, &FourManifoldSpec::named("CP2").unwrap()).unwrap();
        assert_eq!(cp2.to_cyclo(), Cyclo::from_int(2) * (Cyclo::one() + Cyclo::root_of_unity(1, 4)));
        let k3 = FourManifoldSpec::named("K3").unwrap();
        assert_eq!(partition_closed(&MetricGroup::trivial(), &k3).unwrap().to_cyclo(), Cyclo::one());
        assert_eq!(partition_sum(&MetricGroup::trivial(), &k3).unwrap(), Cyclo::one());
    }

    #[test]
    fn blockwise_agrees() {
        let m = MetricGroup::cyclic(3, PhaseQZ::new(1, 3)).unwrap();
        for name in ["CP2", "S2xS2", "T4"] {
            let x = FourManifoldSpec::named(name).unwrap();
            assert_eq!(partition_sum(&m, &x).unwrap(), partition_sum_blockwise(&m, &x).unwrap(), "{name}");
        }
    }

    #[test]
    fn connected_sum_and_reversal() {
        let m = MetricGroup::cyclic(3, PhaseQZ::new(1, 3)).unwrap();
        let (a, b) = (FourManifoldSpec::named("CP2").unwrap(), FourManifoldSpec::named("S2xS2").unwrap());
        let s4 = partition_closed(&m, &FourManifoldSpec::named("S4").unwrap()).unwrap();
        let lhs = partition_closed(&m, &a.connected_sum(&b)).unwrap().mul(&s4);
        let rhs = partition_closed(&m, &a).unwrap().mul(&partition_closed(&m, &b).unwrap());
        assert_eq!(lhs, rhs);
        let z = partition_sum(&m, &a).unwrap();
        assert_eq!(partition_sum(&m, &a.reversed()).unwrap(), z.conj());
    }

    #[test]
    fn gerbe_tower() {
        let s4 = FourManifoldSpec::named("S4").unwrap();
        let t = gerbe_pi_tower(5, &s4).unwrap();
        assert_eq!(groupoid_cardinality(&t), BigRational::from_integer(BigInt::from(5)));
        let zero_q = MetricGroup::new(crate::abgroup::FinAbGroup::cyclic(5), vec![PhaseQZ::ZERO], vec![]).unwrap();
        assert_eq!(partition_sum(&zero_q, &s4).unwrap().as_rational().unwrap(), groupoid_cardinality(&t));
        let t4 = FourManifoldSpec::named("T4").unwrap();
        let tt = gerbe_pi_tower(2, &t4).unwrap();
        let zero2 = MetricGroup::new(crate::abgroup::FinAbGroup::cyclic(2), vec![PhaseQZ::ZERO], vec![]).unwrap();
        assert_eq!(partition_sum(&zero2, &t4).unwrap().as_rational().unwrap(), groupoid_cardinality(&tt));
    }
}
