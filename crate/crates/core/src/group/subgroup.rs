use std::collections::HashSet;
use std::fmt;

use super::{Caps, PermutationGroup};
use crate::perm::Permutation;

/// A subgroup held as its sorted element list plus a small generating set.
///
/// Equality is element-set equality.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    parent_order: u128,
}

impl Subgroup {
    /// `elements` must be sorted, closed and contain the identity.
    pub(crate) fn from_sorted_elements(elements: Vec<Permutation>, parent_order: u128) -> Self {
        let generators = greedy_generators(&elements);
        Self::with_generators(elements, generators, parent_order)
    }

    pub(crate) fn with_generators(
        elements: Vec<Permutation>,
        generators: Vec<Permutation>,
        parent_order: u128,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements[0].is_identity());
        debug_assert_eq!(parent_order % elements.len() as u128, 0);
        Subgroup {
            elements,
            generators,
            parent_order,
        }
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> u128 {
        self.parent_order
    }

    pub fn index(&self) -> u128 {
        self.parent_order / self.order() as u128
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self
            .elements
            .iter()
            .filter(|g| other.contains(g))
            .cloned()
            .collect();
        Subgroup::from_sorted_elements(elements, self.parent_order)
    }

    pub fn orbits(&self, degree: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; degree];
        let mut out = Vec::new();
        for v in 0..degree {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            let mut orbit = vec![v];
            let mut i = 0;
            while i < orbit.len() {
                for g in &self.generators {
                    let y = g.apply(orbit[i]);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits(self.degree()).len() == 1
    }

    pub fn to_group(&self, caps: Caps) -> PermutationGroup {
        PermutationGroup::from_sorted_elements(
            self.elements.clone(),
            self.generators.clone(),
            caps,
        )
    }
}

/// Scans the sorted elements and keeps each one not yet generated.
fn greedy_generators(elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut generated: HashSet<&Permutation> = HashSet::new();
    generated.insert(&elements[0]);
    let total = elements.len();
    for g in elements {
        if generated.len() == total {
            break;
        }
        if generated.contains(g) {
            continue;
        }
        gens.push(g.clone());
        // Extend the closure; every product lands inside `elements`.
        let mut frontier: Vec<Permutation> = generated.iter().map(|&x| x.clone()).collect();
        while let Some(x) = frontier.pop() {
            for s in &gens {
                let y = s.compose_unchecked(&x);
                if let Ok(pos) = elements.binary_search(&y) {
                    if generated.insert(&elements[pos]) {
                        frontier.push(y);
                    }
                }
            }
        }
    }
    gens
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {self})", self.order())
    }
}

/// `<g1, g2, ...>` in canonical cycle notation.
impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        if self.generators.is_empty() {
            write!(f, "()")?;
        }
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}
