use num_complex::Complex;
use serde::Serialize;

use super::MetricGroup;
use crate::arith::exact_sqrt;
use crate::error::{check_size, Error, Result};
use crate::exactnum::PhaseQZ;
use crate::linalg::Matrix;
use crate::monomial::MonomialSystem;
use crate::Cyclo;

/// Largest `|A|^{2g}` accepted by the Heisenberg computations.
pub const HEISENBERG_LIMIT: u128 = 1 << 20;

/// Cocycle orders up to this bound use exact cyclotomics in the dense
/// cross-check; larger ones use complex floats.
pub const EXACT_CENTER_ORDER_LIMIT: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeisenbergSummary {
    pub algebra_dim: u128,
    pub center_dim: u128,
    pub irrep_dim: u128,
}

/// The group `A^{2g}` with elements `(a_1..a_g, b_1..b_g)` encoded as
/// mixed-radix indices over element indices of `A`.
struct Heis<'a> {
    m: &'a MetricGroup,
    g: usize,
    size: usize,
    /// `b(x, y)` numerators for element indices of `A`.
    btab: Vec<u64>,
}

impl<'a> Heis<'a> {
    fn new(m: &'a MetricGroup, g: usize) -> Self {
        let size = m.order() as usize;
        let elems: Vec<Vec<i64>> = m.group().elements().collect();
        let mut btab = vec![0u64; size * size];
        for x in 0..size {
            for y in 0..size {
                btab[x * size + y] = m.b_num(&elems[x], &elems[y]);
            }
        }
        Heis { m, g, size, btab }
    }

    fn dim(&self) -> usize {
        self.size.pow(2 * self.g as u32)
    }

    fn coords(&self, mut idx: usize) -> Vec<usize> {
        (0..2 * self.g)
            .map(|_| {
                let c = idx % self.size;
                idx /= self.size;
                c
            })
            .collect()
    }

    fn index(&self, c: &[usize]) -> usize {
        c.iter().rev().fold(0, |acc, &x| acc * self.size + x)
    }

    fn add_a(&self, x: usize, y: usize) -> usize {
        let group = self.m.group();
        group.index_of(&group.add(&group.element_at(x), &group.element_at(y)))
    }

    fn add(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.add_a(a, b)).collect()
    }

    fn b(&self, x: usize, y: usize) -> u64 {
        self.btab[x * self.size + y]
    }

    /// `ε((a,b),(a',b')) = Σ_i b(a_i, b'_i)` as a numerator.
    fn cocycle(&self, x: &[usize], y: &[usize]) -> u64 {
        let n = self.m.denominator();
        (0..self.g).map(|i| self.b(x[i], y[self.g + i])).sum::<u64>() % n
    }

    fn phase(&self, num: u64) -> PhaseQZ {
        PhaseQZ::new(num as i64, self.m.denominator() as i64)
    }

    /// Generators of `A^{2g}`: a generator of `A` placed in one slot.
    fn generators(&self) -> Vec<Vec<usize>> {
        let group = self.m.group();
        let mut out = Vec::new();
        for slot in 0..2 * self.g {
            for k in 0..group.rank() {
                let mut c = vec![0usize; 2 * self.g];
                c[slot] = group.index_of(&group.generator(k));
                out.push(c);
            }
        }
        out
    }
}

/// Center dimension of the twisted group algebra of `A^{2g}`, by exact
/// propagation of the central-element equations
/// `a_x·(e(ε(h,x)) − e(ε(x,h))) = 0` for generators `h`.
pub fn heisenberg_center_dim(m: &MetricGroup, g: usize) -> Result<u128> {
    let h = Heis::new(m, g);
    check_size(h.dim() as u128, HEISENBERG_LIMIT)?;
    let gens = h.generators();
    let mut sys = MonomialSystem::new(h.dim());
    for x in 0..h.dim() {
        let cx = h.coords(x);
        for gen in &gens {
            let diff = h.phase(h.cocycle(gen, &cx)) - h.phase(h.cocycle(&cx, gen));
            sys.relate(x, x, diff);
        }
    }
    Ok(sys.dimension() as u128)
}

/// The same center dimension by dense linear algebra on the commutator
/// maps `a ↦ δ_h·a − a·δ_h`; exact over cyclotomics for small cocycle
/// orders, floating point otherwise.
pub fn heisenberg_center_dim_dense(m: &MetricGroup, g: usize) -> Result<u128> {
    let h = Heis::new(m, g);
    check_size(h.dim() as u128, 4096)?;
    let gens = h.generators();
    let dim = h.dim();
    let entries = |x: usize, gen: &[usize]| -> (usize, PhaseQZ, PhaseQZ) {
        let cx = h.coords(x);
        let row = h.index(&h.add(gen, &cx));
        (row, h.phase(h.cocycle(gen, &cx)), h.phase(h.cocycle(&cx, gen)))
    };
    if m.denominator() <= EXACT_CENTER_ORDER_LIMIT {
        let mut mat = Matrix::<Cyclo>::zeros(gens.len() * dim, dim);
        for (k, gen) in gens.iter().enumerate() {
            for x in 0..dim {
                let (row, l, r) = entries(x, gen);
                mat[(k * dim + row, x)] = Cyclo::from_phase(l) - Cyclo::from_phase(r);
            }
        }
        Ok(mat.nullity() as u128)
    } else {
        let e = |p: PhaseQZ| Complex::from_polar(1.0, std::f64::consts::TAU * p.to_f64());
        let mut mat = Matrix::<Complex<f64>>::zeros(gens.len() * dim, dim);
        for (k, gen) in gens.iter().enumerate() {
            for x in 0..dim {
                let (row, l, r) = entries(x, gen);
                mat[(k * dim + row, x)] = e(l) - e(r);
            }
        }
        Ok(mat.nullity() as u128)
    }
}

/// Checks that `ρ(a,b)|u⟩ = e(−b(u+a, b))·|u+a⟩` on `C[A^g]` satisfies
/// `ρ(x)ρ(y) = e(ε(x,y))·ρ(x+y)` for all `x` and generators `y`, and that
/// the characters `u ↦ b(u, β)` are distinct for distinct `β ∈ A^g`.
pub fn schrodinger_check(m: &MetricGroup, g: usize) -> Result<bool> {
    if g == 0 {
        return Ok(true);
    }
    let h = Heis::new(m, g);
    check_size(h.dim() as u128, HEISENBERG_LIMIT)?;
    let n = m.denominator();
    let vdim = h.size.pow(g as u32);
    let half = |idx: usize| -> Vec<usize> { h.coords(idx)[..g].to_vec() };
    let pair_b = |u: &[usize], beta: &[usize]| -> u64 { (0..g).map(|i| h.b(u[i], beta[i])).sum::<u64>() % n };
    // ρ(x)|u⟩ = e(ph)|u'⟩
    let act = |x: &[usize], u: &[usize]| -> (Vec<usize>, u64) {
        let shifted = h.add(&x[..g], u);
        let ph = (n - pair_b(&shifted, &x[g..])) % n;
        (shifted, ph)
    };
    let basis: Vec<Vec<usize>> = (0..vdim).map(half).collect();
    for x in 0..h.dim() {
        let cx = h.coords(x);
        for y in h.generators() {
            let eps = h.cocycle(&cx, &y);
            let xy = h.add(&cx, &y);
            for u in &basis {
                let (u1, p1) = act(&y, u);
                let (u2, p2) = act(&cx, &u1);
                let (w, pw) = act(&xy, u);
                if u2 != w || (p1 + p2) % n != (eps + pw) % n {
                    return Ok(false);
                }
            }
        }
    }
    let mut chars = std::collections::HashSet::new();
    for beta in &basis {
        let values: Vec<u64> = basis.iter().map(|u| pair_b(u, beta)).collect();
        if !chars.insert(values) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimensions of the Heisenberg twisted group algebra of `A^{2g}`: total
/// dimension, center dimension (by solving the central-element equations),
/// and the dimension of its irreducible module when the center is trivial.
pub fn heisenberg_summary(m: &MetricGroup, g: usize) -> Result<HeisenbergSummary> {
    m.require_nondegenerate()?;
    if g == 0 {
        return Ok(HeisenbergSummary { algebra_dim: 1, center_dim: 1, irrep_dim: 1 });
    }
    let algebra_dim = m.order().pow(2 * g as u32);
    let center_dim = heisenberg_center_dim(m, g)?;
    if center_dim != 1 {
        return Err(Error::DegenerateForm(format!("Heisenberg algebra has a {center_dim}-dimensional center")));
    }
    let irrep_dim = u64::try_from(algebra_dim)
        .ok()
        .and_then(exact_sqrt)
        .ok_or_else(|| Error::NonIntegerDimension(format!("√{algebra_dim}")))? as u128;
    Ok(HeisenbergSummary { algebra_dim, center_dim, irrep_dim })
}
