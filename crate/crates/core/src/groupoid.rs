//! Finite groupoids presented as action groupoids `Γ ⋉ S`, their
//! cardinalities, and the 1-dimensional finite path integral: invariant
//! sections of local systems and pushforward along correspondences.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dw::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactnum::PhaseQZ;
use crate::linalg::Matrix;
use crate::{Cyclo, Rational};

/// Homotopy-group orders per connected component: `[#π₁, #π₂, …]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTower {
    components: Vec<Vec<u64>>,
}

impl PiTower {
    pub fn new(components: Vec<Vec<u64>>) -> Result<Self> {
        if components.iter().flatten().any(|&x| x == 0) {
            return Err(Error::InvalidInput("homotopy group orders must be positive".into()));
        }
        Ok(PiTower { components })
    }

    pub fn components(&self) -> &[Vec<u64>] {
        &self.components
    }

    /// `*//G`.
    pub fn classifying(order: u64) -> Self {
        PiTower { components: vec![vec![order]] }
    }

    /// `B²F`: one component with `π₁ = 1`, `π₂ = F`.
    pub fn double_classifying(order: u64) -> Self {
        PiTower { components: vec![vec![1, order]] }
    }
}

/// `Σ_components Π_i (#π_i)^{(−1)^i}`.
pub fn groupoid_cardinality(t: &PiTower) -> Rational {
    let mut total = Rational::zero();
    for comp in &t.components {
        let mut term = Rational::one();
        for (i, &order) in comp.iter().enumerate() {
            let o = Rational::from_integer(BigInt::from(order));
            term = if i % 2 == 0 { term / o } else { term * o };
        }
        total += term;
    }
    total
}

/// `Γ ⋉ S` with `action[γ][s] = γ·s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionGroupoid {
    group: FiniteGroup,
    action: Vec<Vec<usize>>,
}

impl ActionGroupoid {
    pub fn new(group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = group.order();
        if action.len() != n {
            return Err(Error::ShapeMismatch("action table needs one row per group element".into()));
        }
        let size = action[0].len();
        if action.iter().any(|r| r.len() != size) || action.iter().flatten().any(|&s| s >= size) {
            return Err(Error::ShapeMismatch("action rows must be maps of one finite set".into()));
        }
        let e = group.identity();
        for s in 0..size {
            if action[e][s] != s {
                return Err(Error::InvalidInput(format!("identity moves object {s}")));
            }
            for g in 0..n {
                for h in 0..n {
                    if action[group.mul(g, h)][s] != action[g][action[h][s]] {
                        return Err(Error::InvalidInput(format!("action is not compatible at ({g}, {h}, {s})")));
                    }
                }
            }
        }
        Ok(ActionGroupoid { group, action })
    }

    /// `*//G`.
    pub fn point(group: FiniteGroup) -> Self {
        let action = vec![vec![0]; group.order()];
        ActionGroupoid { group, action }
    }

    /// `G//G` by conjugation.
    pub fn adjoint(group: FiniteGroup) -> Self {
        let n = group.order();
        let action = (0..n).map(|g| (0..n).map(|x| group.conj(g, x)).collect()).collect();
        ActionGroupoid { group, action }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn objects(&self) -> usize {
        self.action[0].len()
    }

    pub fn act(&self, g: usize, s: usize) -> usize {
        self.action[g][s]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.objects()];
        let mut out = Vec::new();
        for s in 0..self.objects() {
            if seen[s] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, s)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &t in &orbit {
                seen[t] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer_order(&self, s: usize) -> usize {
        (0..self.group.order()).filter(|&g| self.act(g, s) == s).count()
    }

    pub fn pi_tower(&self) -> PiTower {
        let comps = self.orbits().iter().map(|o| vec![self.stabilizer_order(o[0]) as u64]).collect();
        PiTower { components: comps }
    }

    pub fn cardinality(&self) -> Rational {
        groupoid_cardinality(&self.pi_tower())
    }

    /// `X × Y` with group `Γ_X × Γ_Y` and objects `(s, t)` at `s + |S_X|·t`.
    pub fn product(&self, other: &ActionGroupoid) -> ActionGroupoid {
        let group = self.group.product(&other.group);
        let (n, m) = (self.group.order(), self.objects());
        let action = (0..group.order())
            .map(|g| {
                (0..m * other.objects())
                    .map(|s| self.act(g % n, s % m) + m * other.act(g / n, s / m))
                    .collect()
            })
            .collect();
        ActionGroupoid { group, action }
    }
}

/// The bordisms whose groupoids of principal bundles are built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Manifold1 {
    Point,
    Circle,
}

pub fn bun_groupoid(m: Manifold1, g: FiniteGroup) -> ActionGroupoid {
    match m {
        Manifold1::Point => ActionGroupoid::point(g),
        Manifold1::Circle => ActionGroupoid::adjoint(g),
    }
}

/// A functor `Γ ⋉ S → Vect`: fibers over objects and `ρ(γ, s): V_s → V_{γs}`.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    groupoid: ActionGroupoid,
    dims: Vec<usize>,
    rho: Vec<Vec<Matrix<Cyclo>>>,
}

impl LocalSystem {
    /// Checks shapes only; see [`LocalSystem::is_functorial`].
    pub fn new(groupoid: ActionGroupoid, dims: Vec<usize>, rho: Vec<Vec<Matrix<Cyclo>>>) -> Result<Self> {
        if dims.len() != groupoid.objects() || rho.len() != groupoid.group.order() {
            return Err(Error::ShapeMismatch("local system does not match the groupoid".into()));
        }
        for (g, row) in rho.iter().enumerate() {
            if row.len() != dims.len() {
                return Err(Error::ShapeMismatch("local system needs a map per object".into()));
            }
            for (s, m) in row.iter().enumerate() {
                if m.rows() != dims[groupoid.act(g, s)] || m.cols() != dims[s] {
                    return Err(Error::ShapeMismatch(format!("ρ({g}, {s}) has the wrong shape")));
                }
            }
        }
        Ok(LocalSystem { groupoid, dims, rho })
    }

    /// A line bundle with `ρ(γ, s) = e(f(γ, s))`.
    pub fn from_phases(groupoid: ActionGroupoid, f: impl Fn(usize, usize) -> PhaseQZ) -> Self {
        let rho = (0..groupoid.group.order())
            .map(|g| (0..groupoid.objects()).map(|s| Matrix::from_vec(1, 1, vec![Cyclo::from_phase(f(g, s))])).collect())
            .collect();
        let dims = vec![1; groupoid.objects()];
        LocalSystem { groupoid, dims, rho }
    }

    pub fn trivial(groupoid: ActionGroupoid) -> Self {
        Self::from_phases(groupoid, |_, _| PhaseQZ::ZERO)
    }

    /// The character `λ` on `*//G`.
    pub fn character(group: FiniteGroup, lambda: &[PhaseQZ]) -> Result<Self> {
        if lambda.len() != group.order() {
            return Err(Error::ShapeMismatch("character needs a value per element".into()));
        }
        Ok(Self::from_phases(ActionGroupoid::point(group), |g, _| lambda[g]))
    }

    pub fn groupoid(&self) -> &ActionGroupoid {
        &self.groupoid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rho(&self, g: usize, s: usize) -> &Matrix<Cyclo> {
        &self.rho[g][s]
    }

    /// `ρ(e, s) = 1` and `ρ(γγ', s) = ρ(γ, γ's)·ρ(γ', s)`.
    pub fn is_functorial(&self) -> bool {
        let grp = &self.groupoid.group;
        let n = grp.order();
        (0..self.dims.len()).all(|s| {
            self.rho[grp.identity()][s] == Matrix::identity(self.dims[s])
                && (0..n).all(|g| {
                    (0..n).all(|h| {
                        self.rho[grp.mul(g, h)][s] == self.rho[g][self.groupoid.act(h, s)].matmul(&self.rho[h][s])
                    })
                })
        })
    }

    /// Offsets of each fiber inside `⊕_s V_s`.
    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|&d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Basis of invariant sections inside `⊕_s V_s`, with the free
    /// coordinates that read off components in that basis.
    pub fn invariant_sections(&self) -> (Vec<Vec<Cyclo>>, Vec<usize>) {
        let total = self.total_dim();
        let off = self.offsets();
        let gens = self.groupoid.group.generators();
        let mut m = Matrix::<Cyclo>::zeros(gens.len() * total, total);
        for (k, &g) in gens.iter().enumerate() {
            for s in 0..self.dims.len() {
                let t = self.groupoid.act(g, s);
                let r = &self.rho[g][s];
                for i in 0..self.dims[t] {
                    for j in 0..self.dims[s] {
                        let idx = (k * total + off[t] + i, off[s] + j);
                        m[idx] = m[idx].clone() + r[(i, j)].clone();
                    }
                }
                for j in 0..self.dims[s] {
                    let idx = (k * total + off[s] + j, off[s] + j);
                    m[idx] = m[idx].clone() - Cyclo::one();
                }
            }
        }
        m.nullspace_with_free()
    }
}

/// `dim lim χ = (1/|Γ|)·Σ_γ Σ_{γs = s} tr ρ(γ, s)`.
pub fn sum1_limit(ls: &LocalSystem) -> Result<u64> {
    let g = &ls.groupoid;
    let mut acc = Cyclo::zero();
    for h in 0..g.group.order() {
        for s in 0..g.objects() {
            if g.act(h, s) == s {
                let r = &ls.rho[h][s];
                for i in 0..ls.dims[s] {
                    acc = acc + r[(i, i)].clone();
                }
            }
        }
    }
    let n = Rational::from_integer(BigInt::from(g.group.order()));
    let value = acc.as_rational().map(|v| v / n);
    match value {
        Some(v) if v.is_integer() && v >= Rational::zero() => {
            u64::try_from(v.to_integer()).map_err(|_| Error::NonIntegerDimension(v.to_string()))
        }
        Some(v) => Err(Error::NonIntegerDimension(v.to_string())),
        None => Err(Error::NonIntegerDimension(acc.to_string())),
    }
}

/// A functor of action groupoids: a homomorphism on groups together with an
/// equivariant map of object sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMap {
    pub hom: Vec<usize>,
    pub obj: Vec<usize>,
}

impl GroupoidMap {
    pub fn identity(x: &ActionGroupoid) -> Self {
        GroupoidMap { hom: (0..x.group.order()).collect(), obj: (0..x.objects()).collect() }
    }

    pub fn check(&self, from: &ActionGroupoid, to: &ActionGroupoid) -> Result<()> {
        let (gf, gt) = (&from.group, &to.group);
        if self.hom.len() != gf.order() || self.obj.len() != from.objects() {
            return Err(Error::ShapeMismatch("groupoid map does not match its source".into()));
        }
        if self.hom.iter().any(|&h| h >= gt.order()) || self.obj.iter().any(|&s| s >= to.objects()) {
            return Err(Error::ShapeMismatch("groupoid map leaves its target".into()));
        }
        for a in 0..gf.order() {
            for b in 0..gf.order() {
                if self.hom[gf.mul(a, b)] != gt.mul(self.hom[a], self.hom[b]) {
                    return Err(Error::InvalidInput("group map is not a homomorphism".into()));
                }
            }
            for s in 0..from.objects() {
                if self.obj[from.act(a, s)] != to.act(self.hom[a], self.obj[s]) {
                    return Err(Error::InvalidInput("object map is not equivariant".into()));
                }
            }
        }
        Ok(())
    }
}

/// `X ← C → Y` with `φ(c): χ(p₁c) → δ(p₂c)` for each object `c`.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub c: ActionGroupoid,
    pub p1: GroupoidMap,
    pub p2: GroupoidMap,
    pub phi: Vec<Matrix<Cyclo>>,
}

impl Correspondence {
    pub fn identity(ls: &LocalSystem) -> Self {
        let x = ls.groupoid.clone();
        let id = GroupoidMap::identity(&x);
        let phi = ls.dims.iter().map(|&d| Matrix::identity(d)).collect();
        Correspondence { c: x, p1: id.clone(), p2: id, phi }
    }

    /// Checks functoriality of the maps and `φ(κc)·χ(p₁κ) = δ(p₂κ)·φ(c)`.
    pub fn check(&self, chi: &LocalSystem, delta: &LocalSystem) -> Result<()> {
        self.p1.check(&self.c, &chi.groupoid)?;
        self.p2.check(&self.c, &delta.groupoid)?;
        if self.phi.len() != self.c.objects() {
            return Err(Error::IncompatibleSystems("need one linear map per object".into()));
        }
        for (s, m) in self.phi.iter().enumerate() {
            if m.rows() != delta.dims[self.p2.obj[s]] || m.cols() != chi.dims[self.p1.obj[s]] {
                return Err(Error::IncompatibleSystems(format!("φ({s}) has the wrong shape")));
            }
        }
        for k in 0..self.c.group.order() {
            for s in 0..self.c.objects() {
                let t = self.c.act(k, s);
                let lhs = self.phi[t].matmul(chi.rho(self.p1.hom[k], self.p1.obj[s]));
                let rhs = delta.rho(self.p2.hom[k], self.p2.obj[s]).matmul(&self.phi[s]);
                if lhs != rhs {
                    return Err(Error::IncompatibleSystems(format!("φ is not equivariant at ({k}, {s})")));
                }
            }
        }
        Ok(())
    }
}

/// The pushforward `⊕_x χ(x) → ⊕_y δ(y)`: the section `f` goes to
/// `y ↦ Σ_{(c, γ: p₂c → y)} δ(γ)·φ(c)·f(p₁c) / |Γ_C|`, the homotopy fiber
/// over `y` counted with groupoid weights.
fn push_full(corr: &Correspondence, chi: &LocalSystem, delta: &LocalSystem) -> Matrix<Cyclo> {
    let (ox, oy) = (chi.offsets(), delta.offsets());
    let mut out = Matrix::<Cyclo>::zeros(delta.total_dim(), chi.total_dim());
    let weight = Rational::new(BigInt::from(1), BigInt::from(corr.c.group.order()));
    let ygrp = delta.groupoid.group.order();
    for c in 0..corr.c.objects() {
        let (x, y0) = (corr.p1.obj[c], corr.p2.obj[c]);
        for g in 0..ygrp {
            let y = delta.groupoid.act(g, y0);
            let m = delta.rho(g, y0).matmul(&corr.phi[c]);
            for i in 0..delta.dims[y] {
                for j in 0..chi.dims[x] {
                    let idx = (oy[y] + i, ox[x] + j);
                    out[idx] = out[idx].clone() + m[(i, j)].scale(&weight);
                }
            }
        }
    }
    out
}

/// The map `Sum₁(X, χ) → Sum₁(Y, δ)` in the bases of
/// [`LocalSystem::invariant_sections`].
pub fn sum1_push(corr: &Correspondence, chi: &LocalSystem, delta: &LocalSystem) -> Result<Matrix<Cyclo>> {
    corr.check(chi, delta)?;
    let full = push_full(corr, chi, delta);
    let (bx, _) = chi.invariant_sections();
    let (_, free_y) = delta.invariant_sections();
    let mut out = Matrix::<Cyclo>::zeros(free_y.len(), bx.len());
    for (j, v) in bx.iter().enumerate() {
        let img = full.mul_vec(v);
        for (i, &f) in free_y.iter().enumerate() {
            out[(i, j)] = img[f].clone();
        }
    }
    Ok(out)
}

/// `X ← C ×_Y D → Z` on objects `(c, γ, d)` with `γ·p₂(c) = p₁'(d)`, acted on
/// by `Γ_C × Γ_D` via `(κ, μ)·(c, γ, d) = (κc, p₁'(μ)·γ·p₂(κ)⁻¹, μd)`, and
/// `φ(c, γ, d) = φ_D(d)·χ_Y(γ, p₂c)·φ_C(c)`.
pub fn compose(first: &Correspondence, second: &Correspondence, middle: &LocalSystem) -> Result<Correspondence> {
    let ygrp = &middle.groupoid.group;
    let y = &middle.groupoid;
    let mut objects: Vec<(usize, usize, usize)> = Vec::new();
    for c in 0..first.c.objects() {
        for g in 0..ygrp.order() {
            for d in 0..second.c.objects() {
                if y.act(g, first.p2.obj[c]) == second.p1.obj[d] {
                    objects.push((c, g, d));
                }
            }
        }
    }
    let pos: std::collections::HashMap<(usize, usize, usize), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let group = first.c.group.product(&second.c.group);
    let nc = first.c.group.order();
    let action = (0..group.order())
        .map(|k| {
            let (kappa, mu) = (k % nc, k / nc);
            objects
                .iter()
                .map(|&(c, g, d)| {
                    let g2 = ygrp.mul(ygrp.mul(second.p1.hom[mu], g), ygrp.inv(first.p2.hom[kappa]));
                    pos[&(first.c.act(kappa, c), g2, second.c.act(mu, d))]
                })
                .collect()
        })
        .collect();
    let c = ActionGroupoid::new(group, action)?;
    let p1 = GroupoidMap {
        hom: (0..c.group.order()).map(|k| first.p1.hom[k % nc]).collect(),
        obj: objects.iter().map(|&(c, _, _)| first.p1.obj[c]).collect(),
    };
    let p2 = GroupoidMap {
        hom: (0..c.group.order()).map(|k| second.p2.hom[k / nc]).collect(),
        obj: objects.iter().map(|&(_, _, d)| second.p2.obj[d]).collect(),
    };
    let phi = objects
        .iter()
        .map(|&(cc, g, d)| second.phi[d].matmul(&middle.rho(g, first.p2.obj[cc]).matmul(&first.phi[cc])))
        .collect();
    Ok(Correspondence { c, p1, p2, phi })
}

/// The 1D theory of a character `λ` closed up around the circle: the
/// interval `∅ → pt₊ ⊔ pt₋` followed by the interval `pt₊ ⊔ pt₋ → ∅`, as a
/// `1×1` matrix.
pub fn circle_via_intervals(group: &FiniteGroup, lambda: &[PhaseQZ]) -> Result<Cyclo> {
    let n = group.order();
    if lambda.len() != n {
        return Err(Error::ShapeMismatch("character needs a value per element".into()));
    }
    let unit = LocalSystem::trivial(ActionGroupoid::point(FiniteGroup::trivial()));
    let pair = ActionGroupoid::point(group.clone()).product(&ActionGroupoid::point(group.clone()));
    // λ on pt₊ and its dual on pt₋
    let ends = LocalSystem::from_phases(pair, |g, _| lambda[g % n] - lambda[g / n]);
    let interval = ActionGroupoid::point(group.clone());
    let to_unit = GroupoidMap { hom: vec![0; n], obj: vec![0] };
    let diagonal = GroupoidMap { hom: (0..n).map(|g| g + n * g).collect(), obj: vec![0] };
    let one = || vec![Matrix::identity(1)];
    let left = Correspondence { c: interval.clone(), p1: to_unit.clone(), p2: diagonal.clone(), phi: one() };
    let right = Correspondence { c: interval, p1: diagonal, p2: to_unit, phi: one() };
    let a = sum1_push(&left, &unit, &ends)?;
    let b = sum1_push(&right, &ends, &unit)?;
    let m = b.matmul(&a);
    Ok(m[(0, 0)].clone())
}
