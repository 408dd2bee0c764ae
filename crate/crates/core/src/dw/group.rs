use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A finite group given by its Cayley table over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms over the whole table.
    pub fn from_cayley(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("Cayley table must be square and nonempty".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidInput("Cayley table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("element {x} has no inverse")))?;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidInput(format!("not associative at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), table, identity, inverse })
    }

    /// The permutation group generated by `gens`, elements sorted
    /// lexicographically (so the identity comes first).
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<Self> {
        let deg = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..deg).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        let mut elems: BTreeSet<Vec<usize>> = BTreeSet::new();
        elems.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = compose(&x, g);
                if elems.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let list: Vec<Vec<usize>> = elems.into_iter().collect();
        let pos: HashMap<&Vec<usize>, usize> = list.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = list.iter().map(|a| list.iter().map(|b| pos[&compose(a, b)]).collect()).collect();
        Self::from_cayley(name, table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_cayley(format!("Z{n}"), table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// `Z/2 × Z/2` with `(a, b)` at index `a + 2b`.
    pub fn klein() -> Self {
        let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        Self::from_cayley("Z2xZ2", table).expect("Klein four-group")
    }

    /// `Q8` with indices `0..8` for `1, i, j, k, −1, −i, −j, −k`.
    pub fn quaternion() -> Self {
        // unit products: (sign, unit) for units 1, i, j, k
        let units = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = units[x % 4][y % 4];
                        ((s + x / 4 + y / 4) % 2) * 4 + u
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley("Q8", table).expect("quaternion group")
    }

    /// Built-ins: `Z<n>` for `n ≤ 20`, `Z2xZ2`, `S3`, `D4`, `Q8`, `A4`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "Z2xZ2" => Ok(Self::klein()),
            "S3" => Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]),
            "D4" => Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
            "Q8" => Ok(Self::quaternion()),
            "A4" => Self::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]),
            _ => match name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                Some(n) if (1..=20).contains(&n) => Self::cyclic(n),
                _ => Err(Error::InvalidInput(format!("unknown group {name:?}"))),
            },
        }
    }

    pub fn builtin_names() -> Vec<String> {
        let mut v: Vec<String> = (1..=20).map(|n| format!("Z{n}")).collect();
        v.extend(["Z2xZ2", "S3", "D4", "Q8", "A4"].map(String::from));
        v
    }

    /// `G × H` with `(x, y)` at index `x + |G|·y`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|a| (0..n * m).map(|b| self.mul(a % n, b % n) + n * other.mul(a / n, b / n)).collect())
            .collect();
        FiniteGroup {
            name: format!("{}x{}", self.name, other.name),
            table,
            identity: self.identity + n * other.identity,
            inverse: (0..n * m).map(|a| self.inv(a % n) + n * other.inv(a / n)).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|x| (0..self.order()).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|g| self.conj(g, x)).collect();
            for &y in &class {
                seen[y] = true;
            }
            out.push(class.into_iter().collect());
        }
        out
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|x| self.element_order(x)).fold(1, num_integer::lcm)
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have = self.span(&gens);
        for x in 0..self.order() {
            if !have[x] {
                gens.push(x);
                have = self.span(&gens);
            }
        }
        gens
    }

    fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut have = vec![false; self.order()];
        have[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !have[y] {
                    have[y] = true;
                    frontier.push(y);
                }
            }
        }
        have
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders_and_classes() {
        let expect = [("S3", 6, 3), ("D4", 8, 5), ("Q8", 8, 5), ("A4", 12, 4), ("Z2xZ2", 4, 4), ("Z7", 7, 7)];
        for (name, order, classes) in expect {
            let g = FiniteGroup::named(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.conjugacy_classes().len(), classes, "{name}");
        }
        assert!(FiniteGroup::named("Z21").is_err());
        assert!(!FiniteGroup::named("Q8").unwrap().is_abelian());
        assert_eq!(FiniteGroup::named("Q8").unwrap().exponent(), 4);
        assert_eq!(FiniteGroup::named("D4").unwrap().exponent(), 4);
    }

    #[test]
    fn d4_and_q8_differ() {
        let count_involutions = |g: &FiniteGroup| (0..g.order()).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(count_involutions(&FiniteGroup::named("D4").unwrap()), 5);
        assert_eq!(count_involutions(&FiniteGroup::quaternion()), 1);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_cayley("x", vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_cayley("x", vec![vec![0, 1], vec![1]]).is_err());
    }
}
