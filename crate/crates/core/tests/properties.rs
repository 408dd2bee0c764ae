use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tqftkit_core::exactnum::{EighthRootForm, PhaseQZ};
use tqftkit_core::lattice::{cocycle_phase_k, commutator_phase_l, default_b, EvenLattice, RationalPoint};
use tqftkit_core::linalg::Matrix;
use tqftkit_core::metric::{gauss_sum, milgram_signature, random_metric_group, MetricGroup};
use tqftkit_core::tqft3::{lens_gauss_norm, rt_invariant, verlinde_dim, SurgeryPresentation};
use tqftkit_core::tqft4::{partition_closed, partition_sum, FourManifoldSpec};
use tqftkit_core::{Cyclo, Rational};

fn group(seed: u64, max_order: u64) -> MetricGroup {
    random_metric_group(&mut ChaCha8Rng::seed_from_u64(seed), max_order)
}

fn cyclo(order: u64, coeffs: &[(i64, i64, i64)]) -> Cyclo {
    Cyclo::from_exponents(order, coeffs.iter().map(|&(k, p, q)| (k, Rational::new(BigInt::from(p), BigInt::from(q)))))
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((0i64..24, -5i64..=5, 1i64..=4), 0..6)
}

fn linking(n: usize) -> impl Strategy<Value = Matrix<i64>> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| if i <= j { v[i * n + j] } else { v[j * n + i] })
    })
}

fn small_manifold() -> impl Strategy<Value = FourManifoldSpec> {
    prop::sample::select(vec!["S4", "CP2", "CP2bar", "S2xS2", "T4"]).prop_map(|n| FourManifoldSpec::named(n).unwrap())
}

fn point(rank: usize) -> impl Strategy<Value = RationalPoint> {
    prop::collection::vec((-20i64..=20, 1i64..=9), rank)
        .prop_map(|v| RationalPoint::new(v.into_iter().map(|(a, b)| Ratio::new(a, b)).collect()))
}

fn shift(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, rank)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn phases_add_mod_one(a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30) {
        let s = PhaseQZ::new(a, b) + PhaseQZ::new(c, d);
        let exact = Ratio::new(a, b) + Ratio::new(c, d);
        prop_assert_eq!(s.value(), exact - exact.floor());
        prop_assert!(s.value() >= Ratio::zero() && s.value() < Ratio::one());
    }

    #[test]
    fn cyclotomic_field_axioms(n in 1u64..=24, x in coeffs(), y in coeffs()) {
        let (a, b) = (cyclo(n, &x), cyclo(n, &y));
        let p = a.clone() * b.clone();
        let err = (p.to_complex() - a.to_complex() * b.to_complex()).norm();
        prop_assert!(err < 1e-9, "float product off by {err}");
        prop_assert_eq!(p.conj(), a.conj() * b.conj());
        if let Some(inv) = b.inverse() {
            prop_assert_eq!(p * inv, a);
        } else {
            prop_assert!(b.is_zero());
        }
    }

    #[test]
    fn gauss_sum_closed_form(seed in any::<u64>()) {
        let m = group(seed, 120);
        let sigma = milgram_signature(&m).unwrap() as i64;
        let closed = EighthRootForm::sqrt_power(m.order() as u64, 1).mul(&EighthRootForm::zeta8(sigma));
        prop_assert_eq!(gauss_sum(&m), closed.to_cyclo());
    }

    #[test]
    fn signature_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (group(s1, 30), group(s2, 30));
        let sum = a.orthogonal_sum(&b).unwrap();
        let (sa, sb, ss) = (milgram_signature(&a).unwrap(), milgram_signature(&b).unwrap(), milgram_signature(&sum).unwrap());
        prop_assert_eq!((sa as i64 + sb as i64).rem_euclid(8), ss as i64);
    }

    #[test]
    fn verlinde_counts_heisenberg_states(seed in any::<u64>(), genus in 0u32..=3) {
        let m = group(seed, 40);
        prop_assert_eq!(verlinde_dim(&m, genus).unwrap(), BigInt::from(m.order()).pow(genus));
    }

    #[test]
    fn four_manifold_connected_sum(seed in any::<u64>(), x in small_manifold(), y in small_manifold()) {
        let m = group(seed, 3);
        let s4 = FourManifoldSpec::named("S4").unwrap();
        let xy = x.connected_sum(&y);
        let z = |w: &FourManifoldSpec| partition_sum(&m, w).unwrap();
        prop_assert_eq!(z(&xy) * z(&s4), z(&x) * z(&y));
        prop_assert_eq!(z(&xy), partition_closed(&m, &xy).unwrap().to_cyclo());
        prop_assert_eq!(z(&x.reversed()), z(&x).conj());
    }

    #[test]
    fn rt_is_a_three_manifold_invariant(seed in any::<u64>(), b in (1usize..=3).prop_flat_map(linking), sign in prop::bool::ANY) {
        let m = group(seed, 5);
        let link = SurgeryPresentation::new(b).unwrap();
        let z = rt_invariant(&m, &link).unwrap();
        prop_assert_eq!(rt_invariant(&m, &link.stabilize(if sign { 1 } else { -1 })).unwrap(), z.clone());
        let n = link.components();
        // Sliding the first handle over the last.
        let slide = Matrix::from_fn(n, n, |i, j| i64::from(i == j) + i64::from(n > 1 && i == n - 1 && j == 0));
        prop_assert_eq!(rt_invariant(&m, &link.congruence(&slide)).unwrap(), z);
    }

    #[test]
    fn lens_space_norm(seed in any::<u64>(), p in -6i64..=6) {
        let m = group(seed, 12);
        let z = rt_invariant(&m, &SurgeryPresentation::lens(p)).unwrap();
        let order = Cyclo::from_int(m.order() as i64);
        prop_assert_eq!(z.clone() * z.conj() * order.clone() * order, lens_gauss_norm(&m, p));
    }

    #[test]
    fn commutator_phase_is_antisymmetric(
        (x, y, p, p2, q, q2) in prop::sample::select(vec![1usize, 2]).prop_flat_map(|r| (point(r), point(r), shift(r), shift(r), shift(r), shift(r)))
    ) {
        let l = if p.len() == 1 { EvenLattice::named("A1").unwrap() } else { EvenLattice::named("A2").unwrap() };
        let b = default_b(&l);
        let lxy = commutator_phase_l(&l, &x, &y, &p, &p2).unwrap();
        let lyx = commutator_phase_l(&l, &y, &x, &p2, &p).unwrap();
        prop_assert_eq!(lxy + lyx, PhaseQZ::ZERO);
        let k = |a: &RationalPoint, c: &RationalPoint, s: &[i64], t: &[i64]| cocycle_phase_k(&l, &b, a, c, s, t).unwrap();
        let pq: Vec<i64> = p.iter().zip(&q).map(|(a, c)| a + c).collect();
        let pq2: Vec<i64> = p2.iter().zip(&q2).map(|(a, c)| a + c).collect();
        prop_assert_eq!(k(&x, &y, &p, &p2) + k(&x.shift(&p), &y.shift(&p2), &q, &q2), k(&x, &y, &pq, &pq2));
    }
}
