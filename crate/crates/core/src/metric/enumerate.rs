use num_integer::Integer;
use rand::Rng;

use super::MetricGroup;
use crate::abgroup::FinAbGroup;
use crate::exactnum::PhaseQZ;

/// All invariant-factor chains `d_1 | … | d_r` with product `n`.
pub fn invariant_factor_chains(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, prev: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in 2..=rest {
            if rest.is_multiple_of(d) && d % prev == 0 {
                cur.push(d);
                rec(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Denominator `m` such that the admissible values of `q(e)` on a
/// generator of order `d` are exactly `(1/m)Z/Z`.
fn q_step(d: u64) -> u64 {
    if d.is_multiple_of(2) {
        2 * d
    } else {
        d
    }
}

fn build(factors: &[u64], q: &[u64], b: &[Vec<u64>]) -> MetricGroup {
    let r = factors.len();
    let q_diag = (0..r).map(|i| PhaseQZ::new(q[i] as i64, q_step(factors[i]) as i64)).collect();
    let b_off = (0..r)
        .map(|i| {
            (i + 1..r)
                .map(|j| PhaseQZ::new(b[i][j - i - 1] as i64, factors[i].gcd(&factors[j]) as i64))
                .collect()
        })
        .collect();
    MetricGroup::new(FinAbGroup::new(factors.to_vec()).expect("chain"), q_diag, b_off).expect("admissible generator data")
}

/// Every nondegenerate quadratic form on every abelian group of order `n`,
/// as generator data (isometric forms appear repeatedly).
pub fn enumerate_metric_groups(n: u64) -> Vec<MetricGroup> {
    let mut out = Vec::new();
    for factors in invariant_factor_chains(n) {
        let r = factors.len();
        let q_ranges: Vec<u64> = factors.iter().map(|&d| q_step(d)).collect();
        let b_ranges: Vec<u64> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).map(|(i, j)| factors[i].gcd(&factors[j])).collect();
        let ranges: Vec<u64> = q_ranges.iter().chain(&b_ranges).copied().collect();
        let total: u64 = ranges.iter().product();
        for mut code in 0..total {
            let digits: Vec<u64> = ranges
                .iter()
                .map(|&m| {
                    let v = code % m;
                    code /= m;
                    v
                })
                .collect();
            let q = &digits[..r];
            let mut b = vec![Vec::new(); r];
            let mut k = r;
            for (i, row) in b.iter_mut().enumerate() {
                for _ in i + 1..r {
                    row.push(digits[k]);
                    k += 1;
                }
            }
            let m = build(&factors, q, &b);
            if m.is_nondegenerate() {
                out.push(m);
            }
        }
    }
    out
}

/// A uniformly drawn nondegenerate form on a randomly chosen group of order
/// between 2 and `max_order`.
pub fn random_metric_group<R: Rng + ?Sized>(rng: &mut R, max_order: u64) -> MetricGroup {
    assert!(max_order >= 2);
    loop {
        let n = rng.gen_range(2..=max_order);
        let chains = invariant_factor_chains(n);
        let factors = &chains[rng.gen_range(0..chains.len())];
        let r = factors.len();
        let q: Vec<u64> = factors.iter().map(|&d| rng.gen_range(0..q_step(d))).collect();
        let b: Vec<Vec<u64>> = (0..r).map(|i| (i + 1..r).map(|j| rng.gen_range(0..factors[i].gcd(&factors[j]))).collect()).collect();
        let m = build(factors, &q, &b);
        if m.is_nondegenerate() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains() {
        assert_eq!(invariant_factor_chains(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(invariant_factor_chains(12), vec![vec![2, 6], vec![12]]);
        assert_eq!(invariant_factor_chains(1), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn small_catalogs() {
        // Z/2: q ∈ {1/4, 3/4}; q = 0, 1/2 are degenerate.
        assert_eq!(enumerate_metric_groups(2).len(), 2);
        // Z/3: q ∈ {1/3, 2/3}.
        assert_eq!(enumerate_metric_groups(3).len(), 2);
        for m in enumerate_metric_groups(4) {
            assert!(m.is_nondegenerate());
            assert_eq!(m.order(), 4);
        }
    }
}
