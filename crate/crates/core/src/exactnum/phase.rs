use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of Q/Z, stored as the reduced fraction `a` with `0 <= a < 1`.
/// It stands for the root of unity `e(a) = exp(2πi a)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PhaseQZ(Ratio<i64>);

impl PhaseQZ {
    pub const ZERO: PhaseQZ = PhaseQZ(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        PhaseQZ::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let d = *r.denom();
        let n = r.numer().rem_euclid(d);
        PhaseQZ(Ratio::new(n, d))
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Numerator over the given common denominator. Panics if `n` is not a
    /// multiple of the phase's own denominator.
    pub fn over(&self, n: u64) -> u64 {
        let d = self.denom() as u64;
        assert!(n.is_multiple_of(d), "denominator {d} does not divide {n}");
        self.numer() as u64 * (n / d)
    }

    pub fn times(&self, k: i64) -> Self {
        let d = self.denom();
        let n = ((self.numer() as i128 * k as i128).rem_euclid(d as i128)) as i64;
        PhaseQZ(Ratio::new(n, d))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Debug for PhaseQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.numer(), self.denom())
    }
}

impl fmt::Display for PhaseQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for PhaseQZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `"p/q"` or an integer. Accepts values outside `[0, 1)` and reduces
/// them; see [`parse_reduced_fraction`] for the strict form.
impl FromStr for PhaseQZ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = parse_fraction(s)?;
        Ok(PhaseQZ::new(n, d))
    }
}

/// Parses `"p/q"` with `q > 0`, returning the numerator and denominator as
/// written.
pub fn parse_fraction(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidInput(format!("not a fraction: {s:?}"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
        None => (t.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d <= 0 {
        return Err(bad());
    }
    Ok((n, d))
}

/// Parses `"p/q"` and rejects fractions that are not in lowest terms.
pub fn parse_reduced_fraction(s: &str) -> Result<Ratio<i64>> {
    let (n, d) = parse_fraction(s)?;
    if n.gcd(&d) != 1 {
        return Err(Error::InvalidInput(format!("fraction {s:?} is not reduced")));
    }
    Ok(Ratio::new_raw(n, d))
}

impl Add for PhaseQZ {
    type Output = PhaseQZ;
    fn add(self, rhs: PhaseQZ) -> PhaseQZ {
        PhaseQZ::from_ratio(self.0 + rhs.0)
    }
}

impl AddAssign for PhaseQZ {
    fn add_assign(&mut self, rhs: PhaseQZ) {
        *self = *self + rhs;
    }
}

impl Sub for PhaseQZ {
    type Output = PhaseQZ;
    fn sub(self, rhs: PhaseQZ) -> PhaseQZ {
        PhaseQZ::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for PhaseQZ {
    type Output = PhaseQZ;
    fn neg(self) -> PhaseQZ {
        PhaseQZ::from_ratio(-self.0)
    }
}

impl Mul<i64> for PhaseQZ {
    type Output = PhaseQZ;
    fn mul(self, k: i64) -> PhaseQZ {
        self.times(k)
    }
}

impl Zero for PhaseQZ {
    fn zero() -> Self {
        PhaseQZ::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::iter::Sum for PhaseQZ {
    fn sum<I: Iterator<Item = PhaseQZ>>(iter: I) -> Self {
        iter.fold(PhaseQZ::ZERO, |a, b| a + b)
    }
}

impl From<Ratio<i64>> for PhaseQZ {
    fn from(r: Ratio<i64>) -> Self {
        PhaseQZ::from_ratio(r)
    }
}

/// Least common multiple of the denominators of a collection of phases.
pub fn common_denominator<'a>(phases: impl IntoIterator<Item = &'a PhaseQZ>) -> u64 {
    phases.into_iter().fold(1u64, |acc, p| acc.lcm(&(p.denom() as u64)))
}
