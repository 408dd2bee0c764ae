//! Finite gauge theory: twisted group algebras and their Frobenius traces,
//! surface sums over commuting tuples, 1D and 3D untwisted counts, and the
//! simple objects of abelian twisted Drinfeld centers.

mod group;

pub use group::FiniteGroup;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_size, Error, Result};
use crate::exactnum::{common_denominator, PhaseQZ};
use crate::linalg::Matrix;
use crate::monomial::MonomialSystem;
use crate::{Cyclo, Rational};

/// Largest enumeration accepted by the brute-force counts.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// A normalized 2-cocycle `c: G × G → Q/Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    group: FiniteGroup,
    table: Vec<Vec<PhaseQZ>>,
}

/// Where a candidate cocycle fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    Normalization { x: usize, y: usize },
    Identity { x: usize, y: usize, z: usize },
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleViolation::Normalization { x, y } => write!(f, "c({x}, {y}) is nonzero on the identity"),
            CocycleViolation::Identity { x, y, z } => write!(f, "cocycle identity fails at ({x}, {y}, {z})"),
        }
    }
}

impl Cocycle2 {
    /// Wraps a table without validating it; see [`validate_cocycle`].
    pub fn from_table(group: FiniteGroup, table: Vec<Vec<PhaseQZ>>) -> Result<Self> {
        let n = group.order();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("cocycle table must be {n}×{n}")));
        }
        Ok(Cocycle2 { group, table })
    }

    pub fn from_fn(group: FiniteGroup, f: impl Fn(usize, usize) -> PhaseQZ) -> Self {
        let n = group.order();
        let table = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        Cocycle2 { group, table }
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        Self::from_fn(group, |_, _| PhaseQZ::ZERO)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn c(&self, x: usize, y: usize) -> PhaseQZ {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<PhaseQZ>] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|p| p.is_zero())
    }

    pub fn denominator(&self) -> u64 {
        common_denominator(self.table.iter().flatten())
    }
}

/// Checks normalization and `c(y,z) − c(xy,z) + c(x,yz) − c(x,y) = 0` over `G³`.
pub fn validate_cocycle(c: &Cocycle2) -> std::result::Result<(), CocycleViolation> {
    let g = &c.group;
    let (n, e) = (g.order(), g.identity());
    for x in 0..n {
        if !c.c(e, x).is_zero() {
            return Err(CocycleViolation::Normalization { x: e, y: x });
        }
        if !c.c(x, e).is_zero() {
            return Err(CocycleViolation::Normalization { x, y: e });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let d = c.c(y, z) - c.c(g.mul(x, y), z) + c.c(x, g.mul(y, z)) - c.c(x, y);
                if !d.is_zero() {
                    return Err(CocycleViolation::Identity { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// `C^c[G]`: basis `δ_x`, product `δ_x·δ_y = e(c(x,y))·δ_{xy}`, trace
/// `tr(δ_x) = [x = e]/|G|`.
#[derive(Clone, Debug)]
pub struct TwistedGroupAlgebra {
    cocycle: Cocycle2,
}

impl TwistedGroupAlgebra {
    pub fn new(cocycle: Cocycle2) -> Result<Self> {
        validate_cocycle(&cocycle).map_err(|v| Error::CocycleViolation(v.to_string()))?;
        Ok(TwistedGroupAlgebra { cocycle })
    }

    pub fn untwisted(group: FiniteGroup) -> Self {
        TwistedGroupAlgebra { cocycle: Cocycle2::trivial(group) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.cocycle.group
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    pub fn dim(&self) -> usize {
        self.group().order()
    }

    pub fn basis_element(&self, x: usize) -> Vec<Cyclo> {
        let mut v = vec![Cyclo::zero(); self.dim()];
        v[x] = Cyclo::one();
        v
    }

    pub fn unit(&self) -> Vec<Cyclo> {
        self.basis_element(self.group().identity())
    }

    pub fn mul(&self, a: &[Cyclo], b: &[Cyclo]) -> Vec<Cyclo> {
        let g = self.group();
        let mut out = vec![Cyclo::zero(); self.dim()];
        for (x, ax) in a.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (y, by) in b.iter().enumerate() {
                if by.is_zero() {
                    continue;
                }
                let term = ax.clone() * by.clone() * Cyclo::from_phase(self.cocycle.c(x, y));
                let xy = g.mul(x, y);
                out[xy] = out[xy].clone() + term;
            }
        }
        out
    }

    pub fn trace(&self, a: &[Cyclo]) -> Cyclo {
        let inv = Rational::new(BigInt::from(1), BigInt::from(self.dim()));
        a[self.group().identity()].scale(&inv)
    }

    /// One central element per conjugacy class on which the twist allows
    /// one, from `a_{gxg⁻¹} = e(c(g,x) − c(gxg⁻¹,g))·a_x`.
    pub fn center_basis(&self) -> Vec<Vec<Cyclo>> {
        let g = self.group();
        let n = g.order();
        let mut sys = MonomialSystem::new(n);
        for h in 0..n {
            for x in 0..n {
                let y = g.conj(h, x);
                sys.relate(x, y, self.cocycle.c(h, x) - self.cocycle.c(y, h));
            }
        }
        sys.basis()
            .into_iter()
            .map(|support| {
                let mut v = vec![Cyclo::zero(); n];
                for (x, p) in support {
                    v[x] = Cyclo::from_phase(p);
                }
                v
            })
            .collect()
    }

    /// Whether `a` commutes with every `δ_x`.
    pub fn is_central(&self, a: &[Cyclo]) -> bool {
        (0..self.dim()).all(|x| {
            let d = self.basis_element(x);
            self.mul(a, &d) == self.mul(&d, a)
        })
    }
}

pub fn algebra_center_dim(a: &TwistedGroupAlgebra) -> usize {
    a.center_basis().len()
}

/// `ε(H^g)` with the handle element `H = Σ_ij (M⁻¹)_ij z_i z_j` of the
/// center, `M_ij = tr(z_i z_j)` for the given basis `z` of `Z(A)`.
pub fn frobenius_partition_in_basis(a: &TwistedGroupAlgebra, basis: &[Vec<Cyclo>], genus: u32) -> Result<Cyclo> {
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |i, j| a.trace(&a.mul(&basis[i], &basis[j])));
    let inv = gram.inverse().map_err(|_| Error::SingularTrace)?;
    let mut handle = vec![Cyclo::zero(); a.dim()];
    for i in 0..k {
        for j in 0..k {
            if inv[(i, j)].is_zero() {
                continue;
            }
            let prod = a.mul(&basis[i], &basis[j]);
            for (h, p) in handle.iter_mut().zip(prod) {
                *h = h.clone() + inv[(i, j)].clone() * p;
            }
        }
    }
    let mut acc = a.unit();
    for _ in 0..genus {
        acc = a.mul(&acc, &handle);
    }
    Ok(a.trace(&acc))
}

/// The closed genus-`g` surface value of the 2D theory determined by `(A, tr)`.
pub fn frobenius_partition(a: &TwistedGroupAlgebra, genus: u32) -> Result<Cyclo> {
    frobenius_partition_in_basis(a, &a.center_basis(), genus)
}

/// Counts tuples in `G^k` accepted by `pred`, enumerated in mixed-radix
/// order with the first coordinate split across threads.
fn count_tuples(order: usize, k: usize, limit: u128, pred: impl Fn(&[usize]) -> bool + Sync) -> Result<u128> {
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(order as u128)).unwrap_or(u128::MAX);
    check_size(total, limit)?;
    if k == 0 {
        return Ok(u128::from(pred(&[])));
    }
    let rest = total / order as u128;
    Ok((0..order)
        .into_par_iter()
        .map(|first| {
            let mut t = vec![0usize; k];
            t[0] = first;
            let mut count = 0u128;
            for _ in 0..rest {
                if pred(&t) {
                    count += 1;
                }
                for slot in t[1..].iter_mut() {
                    *slot += 1;
                    if *slot < order {
                        break;
                    }
                    *slot = 0;
                }
            }
            count
        })
        .sum())
}

fn over_order(count: u128, order: usize) -> Rational {
    Rational::new(BigInt::from(count), BigInt::from(order))
}

/// `#{(a₁,b₁,…,a_g,b_g) : Π[a_i,b_i] = e} / |G|`.
pub fn brute_force_surface(g: &FiniteGroup, genus: usize) -> Result<Rational> {
    let count = count_tuples(g.order(), 2 * genus, BRUTE_FORCE_LIMIT, |t| {
        let prod = t.chunks(2).fold(g.identity(), |acc, ab| g.mul(acc, g.commutator(ab[0], ab[1])));
        prod == g.identity()
    })?;
    Ok(over_order(count, g.order()))
}

/// `(1/|G|)·Σ_g e(λ(g))` for a character `λ: G → Q/Z` given on element indices.
pub fn dim1_partition(g: &FiniteGroup, lambda: &[PhaseQZ]) -> Result<Rational> {
    let n = g.order();
    if lambda.len() != n {
        return Err(Error::ShapeMismatch(format!("character needs {n} values")));
    }
    for x in 0..n {
        for y in 0..n {
            if lambda[g.mul(x, y)] != lambda[x] + lambda[y] {
                return Err(Error::NotACharacter(format!("λ({x}·{y}) ≠ λ({x}) + λ({y})")));
            }
        }
    }
    let sum: Cyclo = lambda.iter().fold(Cyclo::zero(), |acc, &p| acc + Cyclo::from_phase(p));
    let value = sum.as_rational().ok_or_else(|| Error::NotACharacter("character sum is not rational".into()))?;
    Ok(value / Rational::from_integer(BigInt::from(n)))
}

/// A relator word: `(generator index, exponent)` letters.
pub type Word = Vec<(usize, i64)>;

/// `#Hom(π, G) / |G|` for `π = ⟨x_1..x_k | relators⟩`.
pub fn dw3_invariant(g: &FiniteGroup, generators: usize, relators: &[Word]) -> Result<Rational> {
    if let Some(&(i, _)) = relators.iter().flatten().find(|(i, _)| *i >= generators) {
        return Err(Error::InvalidInput(format!("relator uses generator {i} of {generators}")));
    }
    let count = count_tuples(g.order(), generators, BRUTE_FORCE_LIMIT, |t| {
        relators.iter().all(|w| w.iter().fold(g.identity(), |acc, &(i, e)| g.mul(acc, g.pow(t[i], e))) == g.identity())
    })?;
    Ok(over_order(count, g.order()))
}

/// A simple object of the twisted center of an abelian group: a point `x`
/// with a function `φ` on `G` (values listed by element index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSimple {
    pub point: usize,
    pub phi: Vec<PhaseQZ>,
}

/// `ℓ_x(y) = c(y,x) − c(yxy⁻¹, y)`, the phase of `L_{x,y} = K*_{yxy⁻¹,y} ⊗ K_{y,x}`.
fn ell(c: &Cocycle2, x: usize, y: usize) -> PhaseQZ {
    let g = c.group();
    c.c(y, x) - c.c(g.conj(y, x), y)
}

/// All `(x, φ)` with `φ(y) + φ(y') − φ(yy') = ℓ_x(y) + ℓ_x(y') − ℓ_x(yy')`.
///
/// Solutions are searched exhaustively: values of `φ` on a generating set
/// range over the grid `(1/N)Z/Z` (which contains every solution), the rest
/// of `φ` is propagated from the equations and then checked against all of
/// them.
pub fn center_simples_abelian(c: &Cocycle2) -> Result<Vec<CenterSimple>> {
    let g = c.group();
    if !g.is_abelian() {
        return Err(Error::NonAbelian);
    }
    validate_cocycle(c).map_err(|v| Error::CocycleViolation(v.to_string()))?;
    let n = g.order();
    let gens = g.generators();
    let mut out = Vec::new();
    for x in 0..n {
        let defect = |y: usize, z: usize| ell(c, x, y) + ell(c, x, z) - ell(c, x, g.mul(y, z));
        let defects: Vec<PhaseQZ> = (0..n).flat_map(|y| (0..n).map(move |z| (y, z))).map(|(y, z)| defect(y, z)).collect();
        let grid = common_denominator(&defects) as i64 * g.exponent() as i64;
        let candidates = (grid as u128).pow(gens.len() as u32);
        check_size(candidates, BRUTE_FORCE_LIMIT)?;
        let mut choice = vec![0i64; gens.len()];
        for _ in 0..candidates {
            if let Some(phi) = propagate(g, &gens, &choice, grid, &defect) {
                if (0..n).all(|y| (0..n).all(|z| phi[y] + phi[z] - phi[g.mul(y, z)] == defect(y, z))) {
                    out.push(CenterSimple { point: x, phi });
                }
            }
            for slot in choice.iter_mut() {
                *slot += 1;
                if *slot < grid {
                    break;
                }
                *slot = 0;
            }
        }
    }
    Ok(out)
}

/// Extends generator values along `φ(yh) = φ(y) + φ(h) − D(y, h)`; `None`
/// if two paths disagree.
fn propagate(
    g: &FiniteGroup,
    gens: &[usize],
    choice: &[i64],
    grid: i64,
    defect: &impl Fn(usize, usize) -> PhaseQZ,
) -> Option<Vec<PhaseQZ>> {
    let n = g.order();
    let mut phi: Vec<Option<PhaseQZ>> = vec![None; n];
    phi[g.identity()] = Some(defect(g.identity(), g.identity()));
    let mut frontier = vec![g.identity()];
    while let Some(y) = frontier.pop() {
        let py = phi[y].expect("assigned");
        for (k, &h) in gens.iter().enumerate() {
            let z = g.mul(y, h);
            let v = py + PhaseQZ::new(choice[k], grid) - defect(y, h);
            match phi[z] {
                None => {
                    phi[z] = Some(v);
                    frontier.push(z);
                }
                Some(w) if w != v => return None,
                Some(_) => {}
            }
        }
    }
    phi.into_iter().collect()
}
