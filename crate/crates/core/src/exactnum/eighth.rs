use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::cyclo::CycloValue;
use crate::arith::{factorize, legendre, square_free_split};
use crate::error::{Error, Result};

type Cyclo = CycloValue<BigRational>;

/// The closed form `r · m^{e/2} · ζ₈^s` with `r > 0`, `m` square-free and
/// `e ∈ {0, 1}`. When `e = 0` the radicand is normalized to `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EighthRootForm {
    rational: BigRational,
    radicand: u64,
    half_power: u8,
    eighth: u8,
}

impl EighthRootForm {
    /// Builds a normal form; panics if `r <= 0` or `m` is not square-free.
    pub fn new(rational: BigRational, radicand: u64, half_power: u8, eighth: i64) -> Self {
        assert!(rational.is_positive(), "rational part must be positive");
        assert!(half_power <= 1);
        assert!(radicand >= 1 && square_free_split(radicand).0 == 1, "radicand {radicand} is not square-free");
        let (radicand, half_power) = if half_power == 0 || radicand == 1 { (1, 0) } else { (radicand, 1) };
        EighthRootForm { rational, radicand, half_power, eighth: eighth.rem_euclid(8) as u8 }
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_negative() {
            Self::new(-r, 1, 0, 4)
        } else {
            Self::new(r, 1, 0, 0)
        }
    }

    /// `ζ₈^s`.
    pub fn zeta8(s: i64) -> Self {
        Self::new(BigRational::one(), 1, 0, s)
    }

    /// `(√n)^k` for a positive integer `n` and any integer `k`.
    pub fn sqrt_power(n: u64, k: i64) -> Self {
        assert!(n > 0);
        let base = BigRational::from_integer(BigInt::from(n));
        let half = k.div_euclid(2);
        let mut r = pow_rational(&base, half);
        if k.rem_euclid(2) == 0 {
            return Self::new(r, 1, 0, 0);
        }
        let (s, m) = square_free_split(n);
        r *= BigRational::from_integer(BigInt::from(s));
        Self::new(r, m, 1, 0)
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn half_power(&self) -> u8 {
        self.half_power
    }

    pub fn eighth(&self) -> u8 {
        self.eighth
    }

    /// Product of two closed forms, again in normal form.
    pub fn mul(&self, other: &Self) -> Self {
        let mut r = &self.rational * &other.rational;
        let (m1, m2) = (self.radicand, other.radicand);
        let g = m1.gcd(&m2);
        r *= BigRational::from_integer(BigInt::from(g));
        let m = (m1 / g) * (m2 / g);
        Self::new(r, m, if m == 1 { 0 } else { 1 }, self.eighth as i64 + other.eighth as i64)
    }

    pub fn inv(&self) -> Self {
        let m = self.radicand;
        let r = (self.rational.clone() * BigRational::from_integer(BigInt::from(m))).recip();
        Self::new(r, m, self.half_power, -(self.eighth as i64))
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::from_rational(BigRational::one()), |acc, _| acc.mul(&base))
    }

    /// Expands to an exact cyclotomic value.
    pub fn to_cyclo(&self) -> Cyclo {
        let mut v = Cyclo::from_scalar(self.rational.clone()) * Cyclo::root_of_unity(self.eighth as i64, 8);
        if self.half_power == 1 {
            v = v * sqrt_cyclo(self.radicand);
        }
        v
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        let modulus = r * (self.radicand as f64).powf(self.half_power as f64 / 2.0);
        Complex::from_polar(modulus, std::f64::consts::TAU * self.eighth as f64 / 8.0)
    }
}

fn pow_rational(base: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `√m` as a cyclotomic number, from quadratic Gauss sums: `√2 = ζ₈ + ζ₈⁷`
/// and, for odd primes, `g_p² = (−1/p)·p` with `g_p = Σ (k/p) ζ_p^k`.
pub fn sqrt_cyclo(m: u64) -> Cyclo {
    let mut out = Cyclo::one();
    for (p, e) in factorize(m) {
        let root = if p == 2 {
            Cyclo::root_of_unity(1, 8) + Cyclo::root_of_unity(7, 8)
        } else {
            let g = Cyclo::from_exponents(
                p,
                (1..p as i64).map(|k| (k, BigRational::from_integer(BigInt::from(legendre(k, p))))),
            );
            if p % 4 == 1 {
                g
            } else {
                g * Cyclo::root_of_unity(3, 4)
            }
        };
        let root_pow = root.clone().pow(e % 2);
        let square = BigRational::from_integer(BigInt::from(p.pow(e / 2)));
        out = out * root_pow.scale(&square);
    }
    out
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::NotEighthRootForm(format!("|x|² component {x} too large")))
}

/// Recognizes `x` as `r · m^{e/2} · ζ₈^s`.
///
/// `|x|² = x·x̄` must be rational; its square root is split exactly into a
/// rational part and a square-free radicand, and the remaining unit must be
/// an eighth root of unity.
pub fn recognize_eighthroot(x: &Cyclo) -> Result<EighthRootForm> {
    if x.is_zero() {
        return Err(Error::NotEighthRootForm("zero".into()));
    }
    let norm = (x.clone() * x.conj())
        .as_rational()
        .ok_or_else(|| Error::NotEighthRootForm(format!("|x|² is not rational for {x}")))?;
    let (a, b) = (to_u64(norm.numer())?, to_u64(norm.denom())?);
    let (sa, ma) = square_free_split(a);
    let (sb, mb) = square_free_split(b);
    let g = ma.gcd(&mb);
    let m = (ma / g) * (mb / g);
    let r = BigRational::new(BigInt::from(sa) * BigInt::from(g), BigInt::from(sb) * BigInt::from(mb));
    let modulus = EighthRootForm::new(r, m, 1, 0);
    let unit = x.clone() * modulus.inv().to_cyclo();
    let guess = (unit.to_complex().arg() / (std::f64::consts::TAU / 8.0)).round() as i64;
    let candidate = Cyclo::root_of_unity(guess, 8);
    if unit != candidate {
        return Err(Error::NotEighthRootForm(format!("phase of {x} is not an eighth root of unity")));
    }
    Ok(EighthRootForm::new(modulus.rational, modulus.radicand, modulus.half_power, guess))
}

impl fmt::Display for EighthRootForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.half_power == 1 {
            write!(f, "·√{}", self.radicand)?;
        }
        if self.eighth != 0 {
            write!(f, "·ζ8^{}", self.eighth)?;
        }
        Ok(())
    }
}

impl Serialize for EighthRootForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.to_complex();
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("rational", &self.rational.to_string())?;
        map.serialize_entry("sqrt", &self.radicand)?;
        map.serialize_entry("zeta8", &self.eighth)?;
        map.serialize_entry("float", &[z.re, z.im])?;
        map.end()
    }
}
