use std::collections::HashSet;

use super::MetricGroup;
use crate::abgroup::FinAbGroup;

/// All elements of the subgroup generated by `gens`, sorted by index.
pub(crate) fn span(group: &FinAbGroup, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<usize> = HashSet::new();
    let zero = group.zero();
    seen.insert(group.index_of(&zero));
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = group.add(&x, g);
            if seen.insert(group.index_of(&y)) {
                frontier.push(y);
            }
        }
    }
    let mut idx: Vec<usize> = seen.into_iter().collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| group.element_at(i)).collect()
}

/// A subgroup of a metric group, kept as generators plus the explicit list
/// of its elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub generators: Vec<Vec<i64>>,
    elements: Vec<Vec<i64>>,
    index: HashSet<usize>,
}

impl Subgroup {
    pub fn generated_by(group: &FinAbGroup, generators: Vec<Vec<i64>>) -> Subgroup {
        let generators: Vec<Vec<i64>> = generators.iter().map(|g| group.reduce(g)).collect();
        let elements = span(group, &generators);
        let index = elements.iter().map(|x| group.index_of(x)).collect();
        Subgroup { generators, elements, index }
    }

    /// The subgroup consisting of exactly `elements` (which must be closed);
    /// a small generating set is extracted greedily.
    pub fn from_elements(group: &FinAbGroup, elements: Vec<Vec<i64>>) -> Subgroup {
        let mut gens: Vec<Vec<i64>> = Vec::new();
        let mut have: HashSet<usize> = span(group, &gens).iter().map(|x| group.index_of(x)).collect();
        for x in &elements {
            if !have.contains(&group.index_of(x)) {
                gens.push(x.clone());
                have = span(group, &gens).iter().map(|y| group.index_of(y)).collect();
            }
        }
        let sub = Subgroup::generated_by(group, gens);
        debug_assert_eq!(sub.len(), elements.len(), "element list is not a subgroup");
        sub
    }

    pub fn trivial(group: &FinAbGroup) -> Subgroup {
        Subgroup::generated_by(group, vec![])
    }

    pub fn whole(group: &FinAbGroup) -> Subgroup {
        Subgroup::generated_by(group, (0..group.rank()).map(|i| group.generator(i)).collect())
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, group: &FinAbGroup, x: &[i64]) -> bool {
        self.index.contains(&group.index_of(x))
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.index.is_subset(&other.index)
    }

    /// True if the element list is closed under addition and negation.
    pub fn is_closed(&self, group: &FinAbGroup) -> bool {
        self.elements.iter().all(|x| {
            self.contains(group, &group.neg(x)) && self.elements.iter().all(|y| self.contains(group, &group.add(x, y)))
        })
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

/// `{x : b(x, s) = 0 for all s ∈ S}`.
pub fn commutant_subgroup(m: &MetricGroup, s: &Subgroup) -> Subgroup {
    let group = m.group();
    let elements: Vec<Vec<i64>> = group
        .elements()
        .filter(|x| s.generators.iter().all(|g| m.b_num(x, g) == 0))
        .collect();
    Subgroup::from_elements(group, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PhaseQZ;

    #[test]
    fn commutant_examples() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let m = MetricGroup::new(g.clone(), vec![PhaseQZ::ZERO; 2], vec![vec![PhaseQZ::new(1, 2)]]).unwrap();
        assert_eq!(commutant_subgroup(&m, &Subgroup::trivial(&g)), Subgroup::whole(&g));
        assert_eq!(commutant_subgroup(&m, &Subgroup::whole(&g)), Subgroup::trivial(&g));
        let e1 = Subgroup::generated_by(&g, vec![vec![1, 0]]);
        assert_eq!(commutant_subgroup(&m, &e1), e1);
        assert!(e1.is_closed(&g));
    }

    #[test]
    fn span_sizes() {
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        assert_eq!(span(&g, &[vec![1, 2]]).len(), 2);
        assert_eq!(span(&g, &[vec![0, 1], vec![1, 0]]).len(), 8);
    }
}
