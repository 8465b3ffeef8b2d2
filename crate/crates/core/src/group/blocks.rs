use std::fmt;

use super::PermutationGroup;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A partition of `0..degree` into equal-size blocks.
///
/// Blocks are sorted internally and ordered by their smallest point, so two
/// systems describing the same partition compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn new(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; degree];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidBlockSystem("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if seen[x] {
                    return Err(Error::InvalidBlockSystem(format!("point {x} repeated")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidBlockSystem(format!("point {x} not covered")));
        }
        let size = blocks[0].len();
        if blocks.iter().any(|b| b.len() != size) {
            return Err(Error::InvalidBlockSystem("blocks differ in size".into()));
        }
        blocks.sort_unstable();
        Ok(BlockSystem { degree, blocks })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `1 < b < n`.
    pub fn is_proper(&self) -> bool {
        self.block_size() > 1 && self.block_size() < self.degree
    }

    /// `block_index()[x]` is the position of the block holding `x`.
    pub fn block_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.degree];
        for (i, block) in self.blocks.iter().enumerate() {
            for &x in block {
                index[x] = i;
            }
        }
        index
    }

    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        let index = self.block_index();
        self.blocks.iter().all(|block| {
            let target = index[g.apply(block[0])];
            block.iter().all(|&x| index[g.apply(x)] == target)
        })
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (k, x) in block.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; returns false if they were already one.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller root wins so classes stay labelled by their minimum
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest block system in which `a` and `b` share a block.
pub(crate) fn finest_system_joining(group: &PermutationGroup, a: usize, b: usize) -> BlockSystem {
    let n = group.degree();
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    let mut pending = vec![(a, b)];
    while let Some((x, y)) = pending.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                pending.push((gx, gy));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = uf.find(x);
        classes[r].push(x);
    }
    let blocks = classes.into_iter().filter(|c| !c.is_empty()).collect();
    BlockSystem::new(n, blocks).expect("orbits of a transitive group give equal blocks")
}

/// All nontrivial block systems whose block through 0 is minimal.
pub(crate) fn minimal_block_systems(group: &PermutationGroup) -> Result<Vec<BlockSystem>> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = group.degree();
    let mut found: Vec<BlockSystem> = Vec::new();
    for b in 1..n {
        let system = finest_system_joining(group, 0, b);
        if system.is_proper() && !found.contains(&system) {
            found.push(system);
        }
    }
    let block_of_zero = |s: &BlockSystem| s.blocks()[0].clone();
    let mut minimal: Vec<BlockSystem> = found
        .iter()
        .filter(|s| {
            let mine = block_of_zero(s);
            !found.iter().any(|t| {
                let theirs = block_of_zero(t);
                theirs.len() < mine.len() && theirs.iter().all(|x| mine.contains(x))
            })
        })
        .cloned()
        .collect();
    minimal.sort();
    Ok(minimal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(gens: &[&str], n: usize) -> PermutationGroup {
        PermutationGroup::generate(
            gens.iter()
                .map(|s| Permutation::parse_cycles(s, n).unwrap())
                .collect(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn cyclic_four_has_one_system() {
        let c4 = g(&["(0 1 2 3)"], 4);
        let systems = c4.minimal_block_systems().unwrap();
        assert_eq!(systems, vec![BlockSystem::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap()]);
        assert!(!c4.is_primitive());
    }

    #[test]
    fn square_has_only_the_diagonal_system() {
        // every pairing of 4 points, checked against the generators by hand
        let d4 = g(&["(0 1 2 3)", "(1 3)"], 4);
        let pairings = [
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 2], vec![1, 3]],
            vec![vec![0, 3], vec![1, 2]],
        ];
        let invariant: Vec<_> = pairings
            .into_iter()
            .map(|b| BlockSystem::new(4, b).unwrap())
            .filter(|q| d4.generators().iter().all(|x| q.is_invariant_under(x)))
            .collect();
        assert_eq!(d4.minimal_block_systems().unwrap(), invariant);
        assert_eq!(invariant.len(), 1);
    }

    #[test]
    fn primitive_examples() {
        let s4 = g(&["(0 1)", "(0 1 2 3)"], 4);
        assert!(s4.minimal_block_systems().unwrap().is_empty());
        assert!(s4.is_primitive() && s4.is_primitive_non_abelian());

        let f21 = g(&["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"], 7);
        assert!(f21.is_primitive_non_abelian());
        assert_eq!(f21.order() % 2, 1);

        let c7 = g(&["(0 1 2 3 4 5 6)"], 7);
        assert!(c7.is_primitive());
        assert!(!c7.is_primitive_non_abelian());
    }

    #[test]
    fn cyclic_six_systems() {
        let c6 = g(&["(0 1 2 3 4 5)"], 6);
        let systems = c6.minimal_block_systems().unwrap();
        // {0,3} pairs and {0,2,4} triples; neither contains the other
        assert_eq!(systems.len(), 2);
        assert_eq!(systems[0].block_size() * systems[1].block_size(), 6);
    }

    #[test]
    fn intransitive_is_an_error() {
        assert_eq!(
            g(&["(0 1)"], 3).minimal_block_systems().unwrap_err(),
            Error::NotTransitive
        );
    }

    #[test]
    fn invalid_partitions() {
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![2]]).is_err());
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(BlockSystem::new(4, vec![vec![0, 1, 2], vec![3]]).is_err());
        assert!(BlockSystem::new(3, vec![vec![0, 1, 5]]).is_err());
    }

    #[test]
    fn blocks_are_invariant() {
        let d6 = g(&["(0 1 2 3 4 5)", "(1 5)(2 4)"], 6);
        for s in d6.minimal_block_systems().unwrap() {
            assert!(d6.generators().iter().all(|x| s.is_invariant_under(x)));
        }
    }
}
