//! Linear systems whose equations each relate two unknowns by a phase,
//! `a_y = e(φ)·a_x`.
//!
//! Central elements of twisted group algebras are cut out by such systems.
//! They are solved exactly by a union-find with phase potentials: each
//! connected component contributes one free parameter unless a cycle of
//! equations has nonzero total phase, which forces the component to vanish.

use crate::exactnum::PhaseQZ;

/// Union-find over unknowns `0..n` with `a_x = e(pot[x])·a_parent[x]`.
#[derive(Clone, Debug)]
pub struct MonomialSystem {
    parent: Vec<usize>,
    pot: Vec<PhaseQZ>,
    dead: Vec<bool>,
}

impl MonomialSystem {
    pub fn new(n: usize) -> Self {
        MonomialSystem { parent: (0..n).collect(), pot: vec![PhaseQZ::ZERO; n], dead: vec![false; n] }
    }

    /// Root of `x` and the phase `p` with `a_x = e(p)·a_root`.
    fn find(&mut self, x: usize) -> (usize, PhaseQZ) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress: walk back from the node nearest the root.
        let mut acc = PhaseQZ::ZERO;
        for &v in path.iter().rev() {
            acc += self.pot[v];
            self.pot[v] = acc;
            self.parent[v] = r;
        }
        let p = if x == r { PhaseQZ::ZERO } else { self.pot[x] };
        (r, p)
    }

    /// Imposes `a_y = e(phase)·a_x`.
    pub fn relate(&mut self, x: usize, y: usize, phase: PhaseQZ) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            if py != phase + px {
                self.dead[rx] = true;
            }
            return;
        }
        // a_ry = e(phase + px - py)·a_rx
        self.parent[ry] = rx;
        self.pot[ry] = phase + px - py;
        if self.dead[ry] {
            self.dead[rx] = true;
        }
    }

    /// Dimension of the solution space.
    pub fn dimension(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x).0 == x && !self.dead[x]).count()
    }

    /// One basis solution per surviving component, as `(unknown, phase)`
    /// supports: `a_x = e(phase)` on the component, zero elsewhere.
    pub fn basis(&mut self) -> Vec<Vec<(usize, PhaseQZ)>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<(usize, PhaseQZ)>> = Default::default();
        for x in 0..n {
            let (r, p) = self.find(x);
            if !self.dead[r] {
                by_root.entry(r).or_default().push((x, p));
            }
        }
        by_root.into_values().collect()
    }
}
