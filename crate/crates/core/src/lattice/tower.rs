use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{discriminant_form, EvenLattice};
use crate::abgroup::{cokernel, FinAbGroup};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metric::{commutant_subgroup, MetricGroup, Subgroup};

/// The finite groups approximating the torus `𝔱/Π` at level `n`.
#[derive(Clone, Debug)]
pub struct ApproxTower {
    pub n: u64,
    pub rank: usize,
    /// Order of the discriminant group.
    pub f_order: u64,
    /// `Z^r / nZ^r`.
    pub t_star: FinAbGroup,
    /// `coker(nG)`.
    pub t_nf: FinAbGroup,
    /// `coker(n²G)` with `q(m) = mᵀG⁻¹m / 2n²`.
    pub t_n: MetricGroup,
}

impl ApproxTower {
    /// `#T* = nʳ`, `#T_nF = #F·nʳ`, `#𝔱 = #F·n²ʳ`.
    pub fn cardinalities_hold(&self) -> bool {
        let n = self.n as u128;
        let f = self.f_order as u128;
        let nr = n.pow(self.rank as u32);
        self.t_star.order() == nr && self.t_nf.order() == f * nr && self.t_n.order() == f * nr * nr
    }
}

fn scaled(g: &Matrix<i64>, k: i64) -> Result<Matrix<i64>> {
    let data = g
        .data()
        .iter()
        .map(|&x| x.checked_mul(k).ok_or_else(|| Error::InvalidInput("level too large".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_vec(g.rows(), g.cols(), data))
}

fn scaled_rational(m: &Matrix<BigRational>, num: i64, den: i64) -> Matrix<BigRational> {
    let f = BigRational::new(BigInt::from(num), BigInt::from(den));
    m.map(|x| x * &f)
}

pub fn approximation_tower(l: &EvenLattice, n: u64) -> Result<ApproxTower> {
    if n == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    let f_order = l.discriminant_order()?;
    let r = l.rank();
    let ni = i64::try_from(n).map_err(|_| Error::InvalidInput("level too large".into()))?;
    let inv = l.gram_inverse()?;
    let t_star = cokernel(&scaled(&Matrix::identity(r), ni)?)?.group;
    let t_nf = cokernel(&scaled(l.gram(), ni)?)?.group;
    let t_n = MetricGroup::from_presentation(&scaled(l.gram(), ni * ni)?, &scaled_rational(&inv, 1, ni * ni))?;
    Ok(ApproxTower { n, rank: r, f_order, t_star, t_nf, t_n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub perfect: bool,
    /// A nonzero element of the radical of `b`, when there is one.
    pub witness: Option<Vec<i64>>,
}

/// Exhaustive check that `b` on `𝔱⁽ⁿ⁾` identifies it with its character group.
pub fn duality_check(tower: &ApproxTower) -> DualityReport {
    let m = &tower.t_n;
    let zero = m.group().zero();
    let witness = m.radical().into_iter().find(|x| *x != zero);
    DualityReport { perfect: witness.is_none(), witness }
}

/// Which overall sign relates `q_C` on a factor to the form it is compared
/// with. Both flags are set when the form takes only values in `{0, 1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignMatch {
    pub plus: bool,
    pub minus: bool,
}

/// The level-`n` center metric group with its two distinguished factors.
#[derive(Clone, Debug)]
pub struct CenterForm {
    pub c: MetricGroup,
    /// Image of `𝔱⁽ⁿ⁾ × {0}`.
    pub factor_t: Subgroup,
    /// Image of `λ ↦ (G⁻¹λ, λ)`.
    pub factor_f: Subgroup,
    /// `q_C` on `factor_t` against `q` on `𝔱⁽ⁿ⁾`.
    pub t_sign: SignMatch,
    /// `q_C` on `factor_f` against the discriminant form.
    pub f_sign: SignMatch,
    /// The map `𝔱⁽ⁿ⁾ × F → C`, `(x, f) ↦ t(x) + s(f)`, is a bijection.
    pub product_bijective: bool,
}

impl CenterForm {
    pub fn orthogonal_factors(&self) -> bool {
        self.factor_t
            .generators
            .iter()
            .all(|x| self.factor_f.generators.iter().all(|y| self.c.b_num(x, y) == 0))
    }

    pub fn mutual_commutants(&self) -> bool {
        commutant_subgroup(&self.c, &self.factor_t) == self.factor_f
            && commutant_subgroup(&self.c, &self.factor_f) == self.factor_t
    }

    pub fn perfect(&self) -> bool {
        self.c.radical().len() == 1
    }
}

/// The center at level `n`, presented on pairs `(m, λ) ∈ Z^r ⊕ Z^r` standing
/// for `ξ = G⁻¹m/n ∈ 𝔱` and `λ ∈ Λ`, modulo `(n²Gπ, 0)` and `(nGπ, Gπ)`.
/// The quadratic form is the ribbon phase `⟨ξ, G⁻¹λ⟩ − ½‖ξ‖²`.
pub fn center_form(l: &EvenLattice, n: u64) -> Result<CenterForm> {
    let tower = approximation_tower(l, n)?;
    let r = l.rank();
    let ni = n as i64;
    let g = l.gram();
    let inv = l.gram_inverse()?;
    let rel = Matrix::from_fn(2 * r, 2 * r, |i, j| match (i < r, j < r) {
        (true, true) => g[(i, j)] * ni * ni,
        (true, false) => g[(i, j - r)] * ni,
        (false, false) => g[(i - r, j - r)],
        (false, true) => 0,
    });
    let form = Matrix::from_fn(2 * r, 2 * r, |i, j| match (i < r, j < r) {
        (true, true) => -inv[(i, j)].clone() / BigRational::from_integer(BigInt::from(ni * ni)),
        (true, false) => inv[(i, j - r)].clone() / BigRational::from_integer(BigInt::from(ni)),
        (false, true) => inv[(i - r, j)].clone() / BigRational::from_integer(BigInt::from(ni)),
        (false, false) => BigRational::from_integer(BigInt::from(0)),
    });
    let c = MetricGroup::from_presentation(&rel, &form)?;
    let coker = cokernel(&rel)?;
    if c.order() != (tower.f_order as u128).pow(2) * (n as u128).pow(2 * r as u32) {
        return Err(Error::WellDefinednessFailure("center has the wrong order".into()));
    }

    let t_coker = cokernel(&scaled(g, ni * ni)?)?;
    let f_form = discriminant_form(l)?;
    let f_coker = cokernel(g)?;
    let embed_t = |x: &[i64]| -> Vec<i64> {
        let mut v = t_coker.lift(x);
        v.resize(2 * r, 0);
        coker.project(&v)
    };
    let embed_f = |y: &[i64]| -> Vec<i64> {
        let lam = f_coker.lift(y);
        let v: Vec<i64> = lam.iter().map(|&a| a * ni).chain(lam.iter().copied()).collect();
        coker.project(&v)
    };

    let t_group = tower.t_n.group();
    let f_group = f_form.group();
    let factor_t = Subgroup::generated_by(c.group(), (0..t_group.rank()).map(|k| embed_t(&t_group.generator(k))).collect());
    let factor_f = Subgroup::generated_by(c.group(), (0..f_group.rank()).map(|k| embed_f(&f_group.generator(k))).collect());

    let mut t_sign = SignMatch { plus: true, minus: true };
    for x in t_group.elements() {
        let qc = c.q_eval(&embed_t(&x))?;
        let qt = tower.t_n.q_eval(&x)?;
        t_sign.plus &= qc == qt;
        t_sign.minus &= qc == -qt;
    }
    let mut f_sign = SignMatch { plus: true, minus: true };
    for y in f_group.elements() {
        let qc = c.q_eval(&embed_f(&y))?;
        let qf = f_form.q_eval(&y)?;
        f_sign.plus &= qc == qf;
        f_sign.minus &= qc == -qf;
    }

    let mut seen = vec![false; c.order() as usize];
    let t_elems: Vec<Vec<i64>> = factor_t.elements().to_vec();
    let mut product_bijective = factor_t.len() as u128 * factor_f.len() as u128 == c.order();
    if product_bijective {
        'outer: for y in factor_f.elements() {
            for x in &t_elems {
                let idx = c.group().index_of(&c.group().add(x, y));
                if std::mem::replace(&mut seen[idx], true) {
                    product_bijective = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(CenterForm { c, factor_t, factor_f, t_sign, f_sign, product_bijective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PhaseQZ;

    #[test]
    fn tower_examples() {
        let a1 = EvenLattice::named("A1").unwrap();
        let t1 = approximation_tower(&a1, 1).unwrap();
        assert!(t1.t_n.is_isometric(&discriminant_form(&a1).unwrap()));
        let t2 = approximation_tower(&a1, 2).unwrap();
        assert_eq!((t2.t_star.order(), t2.t_nf.order(), t2.t_n.order()), (2, 4, 8));
        assert!(t2.cardinalities_hold());
        assert_eq!(t2.t_n.q_eval(&t2.t_n.group().generator(0)).unwrap(), PhaseQZ::new(1, 16));
        let e8 = approximation_tower(&EvenLattice::e8(), 2).unwrap();
        assert_eq!(e8.t_n.order(), 1 << 16);
        assert!(duality_check(&e8).perfect);
    }

    #[test]
    fn duality_examples() {
        let a1 = EvenLattice::named("A1").unwrap();
        let u = EvenLattice::named("U").unwrap();
        assert!(duality_check(&approximation_tower(&a1, 1).unwrap()).perfect);
        assert!(duality_check(&approximation_tower(&a1, 2).unwrap()).perfect);
        let t = approximation_tower(&u, 3).unwrap();
        assert_eq!(t.t_n.order(), 81);
        assert!(duality_check(&t).perfect);
    }

    #[test]
    fn duality_reports_radical() {
        let mut t = approximation_tower(&EvenLattice::named("A1").unwrap(), 2).unwrap();
        t.t_n = MetricGroup::new(FinAbGroup::new(vec![2, 2]).unwrap(), vec![PhaseQZ::new(1, 4), PhaseQZ::ZERO], vec![vec![PhaseQZ::ZERO]]).unwrap();
        let rep = duality_check(&t);
        assert!(!rep.perfect);
        assert_eq!(rep.witness, Some(vec![0, 1]));
    }

    #[test]
    fn center_examples() {
        let a1 = EvenLattice::named("A1").unwrap();
        let c1 = center_form(&a1, 1).unwrap();
        assert_eq!(c1.c.order(), 4);
        assert_eq!((c1.factor_t.len(), c1.factor_f.len()), (2, 2));
        assert!(c1.orthogonal_factors() && c1.mutual_commutants() && c1.perfect() && c1.product_bijective);
        let c2 = center_form(&a1, 2).unwrap();
        assert_eq!(c2.c.order(), 16);
        assert!(c2.mutual_commutants());
        assert_eq!(c2.t_sign, SignMatch { plus: false, minus: true });
        assert_eq!(c2.f_sign, SignMatch { plus: true, minus: false });
        assert_eq!(center_form(&EvenLattice::e8(), 1).unwrap().c.order(), 1);
    }

    #[test]
    fn center_signs_on_a2() {
        let c = center_form(&EvenLattice::named("A2").unwrap(), 1).unwrap();
        assert_eq!(c.c.order(), 9);
        assert_eq!(c.t_sign, SignMatch { plus: false, minus: true });
        assert_eq!(c.f_sign, SignMatch { plus: true, minus: false });
        assert!(c.product_bijective && c.perfect());
    }
}
