use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::phase::PhaseQZ;
use crate::arith::{divisors, euler_phi, lcm};
use crate::scalar::Field;

/// Exact coefficient field for cyclotomic numbers.
pub trait Coefficient: Field + fmt::Display {
    fn from_int(n: i64) -> Self;
    fn from_i128(n: i128) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coefficient for Ratio<i64> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n)
    }
    fn from_i128(n: i128) -> Self {
        Ratio::from_integer(i64::try_from(n).expect("coefficient overflows i64"))
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Coefficient for Ratio<i128> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn from_i128(n: i128) -> Self {
        Ratio::from_integer(n)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_i128(n: i128) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// from `x^n - 1 = Π_{d | n} Φ_d(x)`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n > 0);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    cyclotomic_cache().lock().unwrap().insert(n, Arc::clone(&poly));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for top in (dn..num.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        quot[top - dn] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[top - dn + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Reduces an integer combination `Σ a_k ζ_n^k` (`a.len() == n`) to the
/// power basis of Q(ζ_n).
pub(crate) fn reduce_integer(n: u64, mut a: Vec<i128>) -> Vec<i128> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for top in (deg..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        a[top] = 0;
        for (i, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                a[top - deg + i] -= c * p as i128;
            }
        }
    }
    a.resize(deg, 0);
    a
}

fn reduce_generic<T: Coefficient>(n: u64, mut a: Vec<T>) -> Vec<T> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for top in (deg..a.len()).rev() {
        if a[top].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut a[top], T::zero());
        for (i, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                let idx = top - deg + i;
                a[idx] = a[idx].clone() - c.clone() * T::from_int(p);
            }
        }
    }
    a.resize(deg, T::zero());
    a
}

/// An exact element `Σ c_k ζ_N^k` of the cyclotomic field Q(ζ_N).
///
/// Coefficients are kept in the power basis `1, ζ, …, ζ^{φ(N)-1}`, i.e.
/// reduced modulo the `N`-th cyclotomic polynomial. Values of different
/// orders compare equal when they agree after lifting to the common order.
#[derive(Clone)]
pub struct CycloValue<T> {
    order: u64,
    coeffs: Vec<T>,
}

impl<T: Coefficient> CycloValue<T> {
    pub fn from_scalar(c: T) -> Self {
        CycloValue { order: 1, coeffs: vec![c] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_scalar(T::from_int(n))
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(k: i64, n: u64) -> Self {
        Self::from_exponents(n, [(k, T::one())])
    }

    /// `e(p) = exp(2πi p)`.
    pub fn from_phase(p: PhaseQZ) -> Self {
        Self::root_of_unity(p.numer(), p.denom() as u64)
    }

    /// Builds `Σ c ζ_n^k` from `(k, c)` terms; exponents are taken mod `n`.
    pub fn from_exponents(n: u64, terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        assert!(n > 0);
        let mut a = vec![T::zero(); n as usize];
        for (k, c) in terms {
            let idx = k.rem_euclid(n as i64) as usize;
            a[idx] = a[idx].clone() + c;
        }
        CycloValue { order: n, coeffs: reduce_generic(n, a) }
    }

    /// Builds `Σ counts[k] ζ_n^k` with integer counts.
    pub fn from_counts(n: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, n);
        let reduced = reduce_integer(n, counts.iter().map(|&c| c as i128).collect());
        CycloValue { order: n, coeffs: reduced.into_iter().map(T::from_i128).collect() }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients in the power basis of Q(ζ_order).
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Re-expresses the value over `Q(ζ_m)`; `m` must be a multiple of the
    /// current order.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.order), "cannot lift order {} to {m}", self.order);
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut a = vec![T::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                a[k * step] = c.clone();
            }
        }
        CycloValue { order: m, coeffs: reduce_generic(m, a) }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        let n = self.order as i64;
        Self::from_exponents(
            self.order,
            self.coeffs.iter().enumerate().map(|(k, c)| (-(k as i64) % n, c.clone())),
        )
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^a` (`a` coprime to the order).
    pub fn galois(&self, a: i64) -> Self {
        Self::from_exponents(
            self.order,
            self.coeffs.iter().enumerate().map(|(k, c)| (a * k as i64, c.clone())),
        )
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Complex::from_polar(c.to_f64(), std::f64::consts::TAU * k as f64 / n))
            .sum()
    }

    pub fn scale(&self, c: &T) -> Self {
        CycloValue { order: self.order, coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// Q[x] modulo the cyclotomic polynomial. `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<T> = cyclotomic_polynomial(self.order).iter().map(|&c| T::from_int(c)).collect();
        let inv = poly_inverse_mod(&trim(self.coeffs.clone()), &modulus)?;
        let mut a = inv;
        a.resize(self.coeffs.len().max(a.len()), T::zero());
        Some(CycloValue { order: self.order, coeffs: reduce_generic(self.order, a) })
    }

    /// Terms `(k, c_k)` with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

fn trim<T: Coefficient>(mut p: Vec<T>) -> Vec<T> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divmod<T: Coefficient>(num: &[T], den: &[T]) -> (Vec<T>, Vec<T>) {
    let den = trim(den.to_vec());
    let dn = den.len() - 1;
    let lead_inv = den[dn].inv();
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (vec![T::zero()], trim(rem));
    }
    let mut quot = vec![T::zero(); rem.len() - dn];
    for top in (dn..rem.len()).rev() {
        if rem[top].is_zero() {
            continue;
        }
        let c = rem[top].clone() * lead_inv.clone();
        for (i, d) in den.iter().enumerate() {
            rem[top - dn + i] = rem[top - dn + i].clone() - c.clone() * d.clone();
        }
        quot[top - dn] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul<T: Coefficient>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

fn poly_sub<T: Coefficient>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_inverse_mod<T: Coefficient>(a: &[T], m: &[T]) -> Option<Vec<T>> {
    let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![T::zero()], vec![T::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].inv();
    Some(s0.into_iter().map(|x| x * c.clone()).collect())
}

impl<T: Coefficient> Zero for CycloValue<T> {
    fn zero() -> Self {
        Self::from_scalar(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<T: Coefficient> One for CycloValue<T> {
    fn one() -> Self {
        Self::from_scalar(T::one())
    }
}

impl<T: Coefficient> PartialEq for CycloValue<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl<T: Coefficient> Add for CycloValue<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = if self.order == rhs.order { (self, rhs) } else { self.aligned(&rhs) };
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect();
        CycloValue { order: a.order, coeffs }
    }
}

impl<T: Coefficient> Sub for CycloValue<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coefficient> Neg for CycloValue<T> {
    type Output = Self;
    fn neg(self) -> Self {
        CycloValue { order: self.order, coeffs: self.coeffs.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Coefficient> Mul for CycloValue<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        let (a, b) = if self.order == rhs.order { (self, rhs) } else { self.aligned(&rhs) };
        let n = a.order as usize;
        let mut acc = vec![T::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let k = (i + j) % n;
                    acc[k] = acc[k].clone() + x.clone() * y.clone();
                }
            }
        }
        CycloValue { order: a.order, coeffs: reduce_generic(a.order, acc) }
    }
}

impl<T: Coefficient> Field for CycloValue<T> {
    fn inv(&self) -> Self {
        self.inverse().expect("inverse of zero cyclotomic value")
    }
}

impl<T: Coefficient + fmt::Display> fmt::Display for CycloValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})·ζ{}^{k}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Coefficient + fmt::Display> fmt::Debug for CycloValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({self})", self.order)
    }
}

/// JSON rendering `{"order": N, "coeffs": {"k": "p/q", …}, "float": [re, im]}`.
impl<T: Coefficient + fmt::Display> Serialize for CycloValue<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: std::collections::BTreeMap<usize, String> =
            self.terms().map(|(k, c)| (k, c.to_string())).collect();
        let z = self.to_complex();
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("order", &self.order)?;
        map.serialize_entry("coeffs", &coeffs)?;
        map.serialize_entry("float", &[z.re, z.im])?;
        map.end()
    }
}

/// Dimension φ(N) of Q(ζ_N) over Q.
pub fn field_degree(n: u64) -> u64 {
    euler_phi(n)
}
