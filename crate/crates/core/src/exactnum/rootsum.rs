use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex;

use super::cyclo::{reduce_integer, Coefficient, CycloValue};
use super::phase::PhaseQZ;

/// An integer combination `Σ counts[k] ζ_N^k`, kept unreduced.
///
/// This is a histogram of phases with a fixed common denominator `N`; it is
/// the accumulator used by Gauss-type sums, converted to a [`CycloValue`]
/// once at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    n: u64,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new(n: u64) -> Self {
        assert!(n > 0);
        RootSum { n, counts: vec![0; n as usize] }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds `c·ζ_N^k`.
    pub fn add_term(&mut self, k: u64, c: i64) {
        self.counts[(k % self.n) as usize] += c;
    }

    pub fn add_phase(&mut self, p: PhaseQZ) {
        let k = p.over(self.n);
        self.add_term(k, 1);
    }

    /// Total number of terms added (the value at ζ = 1).
    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }

    /// Re-indexes onto a multiple `m` of the current order.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.n));
        let step = m / self.n;
        let mut out = RootSum::new(m);
        for (k, &c) in self.counts.iter().enumerate() {
            out.counts[(k as u64 * step) as usize] = c;
        }
        out
    }

    /// Exact zero test, via reduction modulo the cyclotomic polynomial.
    pub fn is_zero(&self) -> bool {
        reduce_integer(self.n, self.counts.iter().map(|&c| c as i128).collect())
            .iter()
            .all(|&c| c == 0)
    }

    /// Coefficients reduced to the power basis of Q(ζ_N).
    pub fn reduced(&self) -> Vec<i128> {
        reduce_integer(self.n, self.counts.iter().map(|&c| c as i128).collect())
    }

    pub fn to_cyclo<T: Coefficient>(&self) -> CycloValue<T> {
        CycloValue::from_counts(self.n, &self.counts)
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.n as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex::from_polar(c as f64, std::f64::consts::TAU * k as f64 / n))
            .sum()
    }
}

impl AddAssign<&RootSum> for RootSum {
    fn add_assign(&mut self, rhs: &RootSum) {
        assert_eq!(self.n, rhs.n, "root sums of different order");
        for (a, b) in self.counts.iter_mut().zip(&rhs.counts) {
            *a += b;
        }
    }
}

impl Add for RootSum {
    type Output = RootSum;
    fn add(mut self, rhs: RootSum) -> RootSum {
        self += &rhs;
        self
    }
}

/// Cyclic convolution, the product in the group ring Z[Z/N].
impl Mul for &RootSum {
    type Output = RootSum;
    fn mul(self, rhs: &RootSum) -> RootSum {
        assert_eq!(self.n, rhs.n, "root sums of different order");
        let n = self.n as usize;
        let mut out = RootSum::new(self.n);
        for (i, &a) in self.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.counts.iter().enumerate() {
                if b != 0 {
                    out.counts[(i + j) % n] += a * b;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn histogram_matches_direct_sum() {
        let mut s = RootSum::new(3);
        s.add_phase(PhaseQZ::ZERO);
        s.add_phase(PhaseQZ::new(1, 3));
        s.add_phase(PhaseQZ::new(1, 3));
        let direct = CycloValue::<BigRational>::from_int(1)
            + CycloValue::root_of_unity(1, 3)
            + CycloValue::root_of_unity(1, 3);
        assert_eq!(s.to_cyclo::<BigRational>(), direct);
        assert_eq!(s.total(), 3);
    }

    #[test]
    fn zero_detection_and_product() {
        let mut s = RootSum::new(6);
        for k in [0, 2, 4] {
            s.add_term(k, 1);
        }
        assert!(s.is_zero());
        let mut t = RootSum::new(4);
        t.add_term(1, 1);
        let sq = &t * &t;
        assert_eq!(sq.counts(), &[0, 0, 1, 0]);
        assert_eq!(t.lift(8).counts()[2], 1);
    }
}
