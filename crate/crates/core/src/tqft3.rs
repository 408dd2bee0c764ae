//! Pointed modular data of a metric group, Verlinde dimensions, and the
//! abelian surgery invariant of 3-manifolds presented by linking matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{EighthRootForm, PhaseQZ, RootSum};
use crate::linalg::{inertia, Matrix};
use crate::metric::{milgram_signature, quadratic_sum, MetricGroup};
use crate::Cyclo;

/// Largest `|A|ⁿ` summed by [`rt_invariant`].
pub const RT_LIMIT: u128 = 100_000_000;

/// `S = D⁻¹·e(−b)`, `T = diag e(q)`, with `D = √|A|` and central charge `c`
/// from the Gauss sum.
#[derive(Clone, Debug)]
pub struct PointedMTC {
    metric: MetricGroup,
    elements: Vec<Vec<i64>>,
    central_charge: u8,
    s_phase: Vec<Vec<PhaseQZ>>,
    t_phase: Vec<PhaseQZ>,
}

/// Outcome of the three modular identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModularChecks {
    pub unitary: bool,
    pub s_squared_is_conjugation: bool,
    pub st_cubed: bool,
}

impl ModularChecks {
    pub fn all(&self) -> bool {
        self.unitary && self.s_squared_is_conjugation && self.st_cubed
    }
}

impl PointedMTC {
    pub fn metric(&self) -> &MetricGroup {
        &self.metric
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    /// Central charge mod 8.
    pub fn central_charge(&self) -> u8 {
        self.central_charge
    }

    /// `D = √|A|`.
    pub fn total_dimension(&self) -> EighthRootForm {
        EighthRootForm::sqrt_power(self.rank() as u64, 1)
    }

    /// `−b(x, y)`, the phase of `D·S_xy`.
    pub fn s_phase(&self, x: usize, y: usize) -> PhaseQZ {
        self.s_phase[x][y]
    }

    pub fn t_phase(&self, x: usize) -> PhaseQZ {
        self.t_phase[x]
    }

    pub fn s_matrix(&self) -> Matrix<Cyclo> {
        let d_inv = self.total_dimension().inv().to_cyclo();
        let n = self.rank();
        Matrix::from_fn(n, n, |x, y| d_inv.clone() * Cyclo::from_phase(self.s_phase[x][y]))
    }

    pub fn t_matrix(&self) -> Matrix<Cyclo> {
        let n = self.rank();
        Matrix::from_fn(n, n, |x, y| if x == y { Cyclo::from_phase(self.t_phase[x]) } else { num_traits::Zero::zero() })
    }
}

fn histogram_is(h: &[i64], n: u64, target: &[i64]) -> bool {
    let mut r = RootSum::new(n);
    for (k, (&a, &b)) in h.iter().zip(target).enumerate() {
        r.add_term(k as u64, a - b);
    }
    r.is_zero()
}

/// The three identities for `Ŝ = e(sign·b)`, all multiplied through by `D`
/// so that they hold over integer combinations of roots of unity:
/// `ŜŜ̄ᵀ = |A|·1`, `Ŝ² = |A|·C`, `(ŜT)³ = |A|·(Σ e(q))·C`.
pub fn modular_checks(m: &MetricGroup, sign: i64) -> ModularChecks {
    let group = m.group();
    let elems: Vec<Vec<i64>> = group.elements().collect();
    let size = elems.len();
    let n = m.denominator();
    let nu = n as usize;
    let b: Vec<Vec<u64>> = elems.iter().map(|x| elems.iter().map(|y| m.b_num(x, y)).collect()).collect();
    let s = |x: usize, y: usize| -> usize { ((sign.rem_euclid(n as i64) as u64 * b[x][y]) % n) as usize };
    let q: Vec<usize> = elems.iter().map(|x| m.q_num(x) as usize).collect();
    let neg: Vec<usize> = elems.iter().map(|x| group.index_of(&group.neg(x))).collect();
    let order = size as i64;
    let mut delta = vec![0i64; nu];
    delta[0] = order;
    let zero = vec![0i64; nu];

    let mut unitary = true;
    let mut squared = true;
    for x in 0..size {
        for y in 0..size {
            let mut h1 = vec![0i64; nu];
            let mut h2 = vec![0i64; nu];
            for z in 0..size {
                h1[(s(x, z) + nu - s(y, z)) % nu] += 1;
                h2[(s(x, z) + s(z, y)) % nu] += 1;
            }
            unitary &= histogram_is(&h1, n, if x == y { &delta } else { &zero });
            squared &= histogram_is(&h2, n, if y == neg[x] { &delta } else { &zero });
        }
    }

    // (ŜT)_{xy} = e(s(x,y) + q(y))
    let st = |x: usize, y: usize| (s(x, y) + q[y]) % nu;
    let mut gauss = vec![0i64; nu];
    for &v in &q {
        gauss[v] += order;
    }
    let mut cubed = true;
    let mut h2 = vec![vec![0i64; nu]; size * size];
    for x in 0..size {
        for z in 0..size {
            let a = st(x, z);
            for y in 0..size {
                h2[x * size + y][(a + st(z, y)) % nu] += 1;
            }
        }
    }
    'outer: for x in 0..size {
        for y in 0..size {
            let mut h3 = vec![0i64; nu];
            for z in 0..size {
                let shift = st(z, y);
                for (k, &c) in h2[x * size + z].iter().enumerate() {
                    if c != 0 {
                        h3[(k + shift) % nu] += c;
                    }
                }
            }
            if !histogram_is(&h3, n, if y == neg[x] { &gauss } else { &zero }) {
                cubed = false;
                break 'outer;
            }
        }
    }
    ModularChecks { unitary, s_squared_is_conjugation: squared, st_cubed: cubed }
}

pub fn modular_data(m: &MetricGroup) -> Result<PointedMTC> {
    m.require_nondegenerate()?;
    let central_charge = milgram_signature(m)?;
    let checks = modular_checks(m, -1);
    if !checks.all() {
        return Err(Error::VerificationFailed(format!("modular identities fail: {checks:?}")));
    }
    let elements: Vec<Vec<i64>> = m.group().elements().collect();
    let s_phase = elements.iter().map(|x| elements.iter().map(|y| -m.b_eval(x, y).expect("element")).collect()).collect();
    let t_phase = elements.iter().map(|x| m.q_eval(x).expect("element")).collect();
    Ok(PointedMTC { metric: m.clone(), elements, central_charge, s_phase, t_phase })
}

/// `Σ_x S_{0x}^{2−2g}`; every `S_{0x}` equals `D⁻¹`.
pub fn verlinde_dim(m: &MetricGroup, genus: u32) -> Result<BigInt> {
    m.require_nondegenerate()?;
    let order = BigRational::from_integer(BigInt::from(m.order()));
    // (D⁻¹)^{2−2g} = |A|^{g−1}
    let per_simple = num_traits::pow(order.clone(), genus as usize) / order.clone();
    let total = per_simple * order;
    if !total.is_integer() {
        return Err(Error::NonIntegerDimension(total.to_string()));
    }
    Ok(total.to_integer())
}

/// `N_xy^z = Σ_w S_xw S_yw S̄_zw / S_0w`, which for pointed data is
/// `|A|⁻¹·Σ_w e(−b(x + y − z, w))`.
pub fn fusion_coefficient(mtc: &PointedMTC, x: usize, y: usize, z: usize) -> BigRational {
    let n = mtc.metric.denominator();
    let size = mtc.rank();
    let mut h = RootSum::new(n);
    for w in 0..size {
        h.add_phase(mtc.s_phase(x, w) + mtc.s_phase(y, w) - mtc.s_phase(z, w));
    }
    let v = h.to_cyclo::<BigRational>().as_rational().unwrap_or_else(|| BigRational::from_integer(BigInt::from(-1)));
    v / BigRational::from_integer(BigInt::from(size))
}

/// Whether the Verlinde coefficients reproduce the group law.
pub fn fusion_is_group_law(mtc: &PointedMTC) -> bool {
    let g = mtc.metric.group();
    let size = mtc.rank();
    (0..size).all(|x| {
        (0..size).all(|y| {
            let sum = g.index_of(&g.add(&mtc.elements[x], &mtc.elements[y]));
            (0..size).all(|z| {
                let want = BigRational::from_integer(BigInt::from((z == sum) as i64));
                fusion_coefficient(mtc, x, y, z) == want
            })
        })
    })
}

/// A framed link by its linking matrix; the empty matrix is `S³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPresentation {
    linking: Matrix<i64>,
}

impl SurgeryPresentation {
    pub fn new(linking: Matrix<i64>) -> Result<Self> {
        if !linking.is_symmetric() {
            return Err(Error::ShapeMismatch("linking matrix must be symmetric".into()));
        }
        Ok(SurgeryPresentation { linking })
    }

    pub fn sphere() -> Self {
        SurgeryPresentation { linking: Matrix::zeros(0, 0) }
    }

    /// `L(p, 1)` from a single `p`-framed unknot.
    pub fn lens(p: i64) -> Self {
        SurgeryPresentation { linking: Matrix::from_vec(1, 1, vec![p]) }
    }

    pub fn linking(&self) -> &Matrix<i64> {
        &self.linking
    }

    pub fn components(&self) -> usize {
        self.linking.rows()
    }

    /// Adds a split `±1`-framed unknot (blow-up).
    pub fn stabilize(&self, sign: i64) -> Self {
        SurgeryPresentation { linking: self.linking.direct_sum(&Matrix::from_vec(1, 1, vec![sign.signum()])) }
    }

    /// `EᵀBE` for a unimodular `E` (handle slides and reorientations).
    pub fn congruence(&self, e: &Matrix<i64>) -> Self {
        SurgeryPresentation { linking: e.transpose().matmul(&self.linking).matmul(e) }
    }

    pub fn connected_sum(&self, other: &Self) -> Self {
        SurgeryPresentation { linking: self.linking.direct_sum(&other.linking) }
    }

    pub fn signature(&self) -> i64 {
        if self.components() == 0 {
            return 0;
        }
        let big = self.linking.map(|&x| BigRational::from_integer(BigInt::from(x)));
        inertia(&big).expect("symmetric").signature()
    }
}

/// `Z = D^{−(n+1)}·ζ₈^{−c·σ(B)}·Σ_{x ∈ Aⁿ} e(Σ B_ii q(x_i) + Σ_{i<j} B_ij b(x_i, x_j))`.
pub fn rt_invariant(m: &MetricGroup, link: &SurgeryPresentation) -> Result<Cyclo> {
    m.require_nondegenerate()?;
    let c = milgram_signature(m)? as i64;
    let n = link.components() as i64;
    let sum = quadratic_sum(m, &link.linking, RT_LIMIT)?.to_cyclo::<BigRational>();
    let order = u64::try_from(m.order()).map_err(|_| Error::InvalidInput("group too large".into()))?;
    let prefactor = EighthRootForm::sqrt_power(order, -(n + 1)).mul(&EighthRootForm::zeta8(-c * link.signature()));
    Ok(prefactor.to_cyclo() * sum)
}

/// `|Σ_x e(p·q(x))|²` by a direct loop, without the tabulated sums.
pub fn lens_gauss_norm(m: &MetricGroup, p: i64) -> Cyclo {
    let g = m
        .group()
        .elements()
        .fold(num_traits::Zero::zero(), |acc: Cyclo, x| acc + Cyclo::from_phase(m.q_eval(&x).expect("element") * p));
    g.clone() * g.conj()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::sqrt_cyclo;
    use num_traits::One;

    fn semion() -> MetricGroup {
        MetricGroup::cyclic(2, PhaseQZ::new(1, 4)).unwrap()
    }

    #[test]
    fn trivial_data() {
        let t = modular_data(&MetricGroup::trivial()).unwrap();
        assert_eq!(t.s_matrix(), Matrix::from_vec(1, 1, vec![Cyclo::one()]));
        assert_eq!(t.t_matrix(), Matrix::from_vec(1, 1, vec![Cyclo::one()]));
    }

    #[test]
    fn semion_data() {
        let t = modular_data(&semion()).unwrap();
        assert_eq!(t.central_charge(), 1);
        let r = sqrt_cyclo(2).inverse().unwrap();
        let s = t.s_matrix();
        assert_eq!(s[(0, 0)], r);
        assert_eq!(s[(1, 1)], -r.clone());
        assert_eq!(t.t_matrix()[(1, 1)], Cyclo::root_of_unity(1, 4));
        // the dense matrices satisfy the normalized identities as well
        let st = s.matmul(&t.t_matrix());
        let st3 = st.matmul(&st).matmul(&st);
        let s2 = s.matmul(&s);
        let zeta = Cyclo::root_of_unity(1, 8);
        assert_eq!(st3, s2.map(|v| v.clone() * zeta.clone()));
    }

    #[test]
    fn z3_data() {
        let m = MetricGroup::cyclic(3, PhaseQZ::new(1, 3)).unwrap();
        let t = modular_data(&m).unwrap();
        assert_eq!(t.rank(), 3);
        assert_eq!(t.s_phase(1, 1), PhaseQZ::new(1, 3));
        assert_eq!(t.central_charge(), 2);
        assert!(fusion_is_group_law(&t));
    }

    #[test]
    fn opposite_convention_fails() {
        // b = −b on the semion, so use Z/3 to separate the conventions
        let m = MetricGroup::cyclic(3, PhaseQZ::new(1, 3)).unwrap();
        assert!(modular_checks(&m, -1).all());
        let plus = modular_checks(&m, 1);
        assert!(plus.unitary && plus.s_squared_is_conjugation);
        assert!(!plus.st_cubed);
    }

    #[test]
    fn verlinde_examples() {
        let m = MetricGroup::cyclic(5, PhaseQZ::new(1, 5)).unwrap();
        assert_eq!(verlinde_dim(&m, 0).unwrap(), BigInt::from(1));
        assert_eq!(verlinde_dim(&m, 1).unwrap(), BigInt::from(5));
        assert_eq!(verlinde_dim(&semion(), 2).unwrap(), BigInt::from(4));
    }

    #[test]
    fn rt_examples() {
        let m = semion();
        let d_inv = sqrt_cyclo(2).inverse().unwrap();
        assert_eq!(rt_invariant(&m, &SurgeryPresentation::sphere()).unwrap(), d_inv);
        assert_eq!(rt_invariant(&m, &SurgeryPresentation::lens(0)).unwrap(), Cyclo::one());
        assert_eq!(rt_invariant(&m, &SurgeryPresentation::lens(1)).unwrap(), d_inv);
        assert_eq!(rt_invariant(&m, &SurgeryPresentation::lens(-1)).unwrap(), d_inv);
    }

    #[test]
    fn rt_moves() {
        let m = MetricGroup::cyclic(4, PhaseQZ::new(1, 8)).unwrap();
        let b = SurgeryPresentation::new(Matrix::from_rows(vec![vec![2, 1], vec![1, -3]])).unwrap();
        let z = rt_invariant(&m, &b).unwrap();
        assert_eq!(rt_invariant(&m, &b.stabilize(1)).unwrap(), z);
        assert_eq!(rt_invariant(&m, &b.stabilize(-1)).unwrap(), z);
        let e = Matrix::from_rows(vec![vec![1, 2], vec![0, -1]]);
        assert_eq!(rt_invariant(&m, &b.congruence(&e)).unwrap(), z);
        let l = SurgeryPresentation::lens(3);
        let s3 = rt_invariant(&m, &SurgeryPresentation::sphere()).unwrap();
        assert_eq!(rt_invariant(&m, &b.connected_sum(&l)).unwrap() * s3, z * rt_invariant(&m, &l).unwrap());
    }

    #[test]
    fn lens_norm() {
        let m = MetricGroup::cyclic(3, PhaseQZ::new(1, 3)).unwrap();
        for p in 1..=6 {
            let z = rt_invariant(&m, &SurgeryPresentation::lens(p)).unwrap();
            let nine = Cyclo::from_int(9);
            assert_eq!(z.clone() * z.conj() * nine, lens_gauss_norm(&m, p), "p={p}");
        }
    }
}
