//! Subgroup lattice at desk scale, md-stabilizers and minimal faithful degree.
//!
//! The lattice is built on element indices with a full multiplication table:
//! it is seeded with every cyclic subgroup and closed under joining with cyclic
//! subgroups until nothing new appears. Subgroups are ordered by order, then by
//! their sorted element list, and grouped into conjugacy classes by explicit
//! conjugation.
//!
//! An md-stabilizer is a subgroup with trivial core that is maximal by
//! inclusion among core-free subgroups. The other reading of the definition,
//! a maximal subgroup that happens to be core-free, is exposed separately as
//! [`SubgroupLattice::core_free_maximal_indices`].

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::{PermutationGroup, Subgroup};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Entry {
    set: FixedBitSet,
    order: usize,
    class: usize,
    core: usize,
}

#[derive(Debug)]
pub struct SubgroupLattice {
    elements: Vec<Permutation>,
    parent_order: u128,
    entries: Vec<Entry>,
    classes: Vec<Vec<usize>>,
    lookup: HashMap<FixedBitSet, usize>,
}

/// Result of the minimal faithful degree search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulDegree {
    /// Smallest total degree of a faithful action.
    pub degree: usize,
    /// Lattice indices of the point stabilizers, one per orbit.
    pub collection: Vec<usize>,
    /// Smallest degree of a faithful transitive action, if any exists.
    pub transitive: Option<(usize, usize)>,
    /// Smallest degree reached with two or more orbits, each one needed.
    pub intransitive: Option<(usize, Vec<usize>)>,
}

impl FaithfulDegree {
    pub fn is_transitive(&self) -> bool {
        self.collection.len() == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutomorphicMode {
    /// Orbit sizes of every subgroup in the lattice.
    SubgroupOrbits,
    /// Suborbit sizes only, used when the lattice is out of reach.
    Suborbits,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AutomorphicNumbers {
    pub mode: AutomorphicMode,
    pub values: BTreeSet<usize>,
}

impl SubgroupLattice {
    pub(crate) fn build(group: &PermutationGroup) -> Result<Self> {
        let order = group.order();
        let cap = group.caps().lattice as u128;
        if order > cap {
            return Err(Error::CapExceeded {
                what: "subgroup lattice",
                needed: order,
                cap,
            });
        }
        let elements = group.elements()?.to_vec();
        let n = elements.len();
        let index = |p: &Permutation| elements.binary_search(p).expect("closed") as u32;
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i * n + j] = index(&a.compose_unchecked(b));
            }
        }
        let mut inverse = vec![0u32; n];
        for i in 0..n {
            if let Some(j) = (0..n).find(|&j| table[i * n + j] == 0) {
                inverse[i] = j as u32;
            }
        }
        let gen_indices: Vec<u32> = group.generators().iter().map(index).collect();

        let ctx = Ctx {
            n,
            table: &table,
            inverse: &inverse,
        };

        // cyclic seeds
        let mut cyclic: Vec<(u32, FixedBitSet)> = Vec::new();
        let mut seen_cyclic: HashMap<FixedBitSet, ()> = HashMap::new();
        for g in 0..n as u32 {
            let set = ctx.closure(&[g]);
            if seen_cyclic.insert(set.clone(), ()).is_none() {
                cyclic.push((g, set));
            }
        }

        let mut found: Vec<(FixedBitSet, Vec<u32>)> = Vec::new();
        let mut lookup: HashMap<FixedBitSet, usize> = HashMap::new();
        for (g, set) in &cyclic {
            lookup.insert(set.clone(), found.len());
            found.push((set.clone(), vec![*g]));
        }
        let mut i = 0;
        while i < found.len() {
            for (g, _) in &cyclic {
                if found[i].0.contains(*g as usize) {
                    continue;
                }
                let mut gens = found[i].1.clone();
                gens.push(*g);
                let joined = ctx.closure_from(&found[i].0, &gens);
                if !lookup.contains_key(&joined) {
                    lookup.insert(joined.clone(), found.len());
                    found.push((joined, gens));
                }
            }
            i += 1;
        }

        let mut sets: Vec<FixedBitSet> = found.into_iter().map(|(s, _)| s).collect();
        sets.sort_by(|a, b| {
            a.count_ones(..)
                .cmp(&b.count_ones(..))
                .then_with(|| a.ones().cmp(b.ones()))
        });
        let lookup: HashMap<FixedBitSet, usize> =
            sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        // conjugacy classes
        let mut class_of = vec![usize::MAX; sets.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..sets.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut k = 0;
            while k < members.len() {
                let current = members[k];
                for &g in &gen_indices {
                    let conj = ctx.conjugate(&sets[current], g);
                    let j = lookup[&conj];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }

        let mut entries: Vec<Entry> = Vec::with_capacity(sets.len());
        for (i, set) in sets.iter().enumerate() {
            let mut core = set.clone();
            for &j in &classes[class_of[i]] {
                core.intersect_with(&sets[j]);
            }
            entries.push(Entry {
                order: set.count_ones(..),
                set: set.clone(),
                class: class_of[i],
                core: lookup[&core],
            });
        }

        Ok(SubgroupLattice {
            elements,
            parent_order: order,
            entries,
            classes,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn group_order(&self) -> u128 {
        self.parent_order
    }

    pub fn order(&self, i: usize) -> usize {
        self.entries[i].order
    }

    pub fn index(&self, i: usize) -> usize {
        self.elements.len() / self.entries[i].order
    }

    pub fn subgroup(&self, i: usize) -> Subgroup {
        let elements = self.entries[i]
            .set
            .ones()
            .map(|k| self.elements[k].clone())
            .collect();
        Subgroup::from_sorted_elements(elements, self.parent_order)
    }

    /// Every subgroup, in lattice order.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        (0..self.len()).map(|i| self.subgroup(i)).collect()
    }

    /// Lattice index of a subgroup given by its elements.
    pub fn find(&self, h: &Subgroup) -> Option<usize> {
        let mut set = FixedBitSet::with_capacity(self.elements.len());
        for g in h.elements() {
            set.insert(self.elements.binary_search(g).ok()?);
        }
        self.lookup.get(&set).copied()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.entries[i].class
    }

    /// First member of each conjugacy class, in class order.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn core_index(&self, i: usize) -> usize {
        self.entries[i].core
    }

    pub fn is_core_free(&self, i: usize) -> bool {
        self.entries[self.entries[i].core].order == 1
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.classes[self.entries[i].class].len() == 1
    }

    /// `A ⊊ B`.
    pub fn is_proper_subgroup(&self, a: usize, b: usize) -> bool {
        let (ea, eb) = (&self.entries[a], &self.entries[b]);
        ea.order < eb.order && eb.order % ea.order == 0 && ea.set.is_subset(&eb.set)
    }

    /// Core-free and not properly contained in another core-free subgroup.
    pub fn is_md_stabilizer(&self, i: usize) -> bool {
        self.is_core_free(i)
            && !(0..self.len()).any(|j| self.is_core_free(j) && self.is_proper_subgroup(i, j))
    }

    /// Class representatives of md-stabilizers.
    pub fn md_stabilizer_indices(&self) -> Vec<usize> {
        self.class_representatives()
            .into_iter()
            .filter(|&i| self.is_md_stabilizer(i))
            .collect()
    }

    pub fn md_stabilizers(&self) -> Vec<Subgroup> {
        self.md_stabilizer_indices()
            .into_iter()
            .map(|i| self.subgroup(i))
            .collect()
    }

    /// Class representatives of maximal subgroups that are core-free.
    pub fn core_free_maximal_indices(&self) -> Vec<usize> {
        let top = self.len() - 1;
        self.class_representatives()
            .into_iter()
            .filter(|&i| {
                i != top
                    && self.is_core_free(i)
                    && !(0..top).any(|j| self.is_proper_subgroup(i, j))
            })
            .collect()
    }

    /// `A` is md iff it is core-free with no core-free proper overgroup.
    pub fn is_md_representation(&self, a: &Subgroup) -> bool {
        self.find(a).is_some_and(|i| self.is_md_stabilizer(i))
    }

    /// Minimum of `Σ |G : Aᵢ|` over collections whose cores meet trivially.
    ///
    /// Only the core and the index of a stabilizer matter, so the search runs
    /// over normal subgroups that occur as cores, each priced at the smallest
    /// index of a subgroup with that core. Branches whose running cost cannot
    /// beat the incumbent are cut, and a member is only added if it shrinks
    /// the running intersection.
    pub fn minimal_faithful_degree(&self) -> FaithfulDegree {
        let n = self.elements.len();
        if n == 1 {
            return FaithfulDegree {
                degree: 1,
                collection: vec![0],
                transitive: Some((1, 0)),
                intransitive: None,
            };
        }
        let top = self.len() - 1;
        // core index -> (cost, cheapest subgroup)
        let mut by_core: HashMap<usize, (usize, usize)> = HashMap::new();
        for i in 0..top {
            let cost = self.index(i);
            let core = self.entries[i].core;
            by_core
                .entry(core)
                .and_modify(|e| {
                    if cost < e.0 {
                        *e = (cost, i);
                    }
                })
                .or_insert((cost, i));
        }
        let mut candidates: Vec<Candidate> = by_core
            .into_iter()
            .map(|(core, (cost, rep))| Candidate {
                core: self.entries[core].set.clone(),
                cost,
                rep,
            })
            .collect();
        candidates.sort_by_key(|c| (c.cost, c.rep));

        let transitive = candidates
            .iter()
            .find(|c| c.core.count_ones(..) == 1)
            .map(|c| (c.cost, c.rep));

        let mut full = FixedBitSet::with_capacity(n);
        full.insert_range(..);
        let mut best: Option<(usize, Vec<usize>)> = None;
        search(&candidates, 0, &full, 0, &mut Vec::new(), 1, &mut best);
        let (degree, collection) = best.expect("the trivial subgroup is always faithful");

        let mut intransitive = None;
        search(&candidates, 0, &full, 0, &mut Vec::new(), 2, &mut intransitive);

        FaithfulDegree {
            degree,
            collection,
            transitive,
            intransitive,
        }
    }
}

struct Candidate {
    core: FixedBitSet,
    cost: usize,
    rep: usize,
}

fn search(
    candidates: &[Candidate],
    start: usize,
    current: &FixedBitSet,
    cost: usize,
    chosen: &mut Vec<usize>,
    min_members: usize,
    best: &mut Option<(usize, Vec<usize>)>,
) {
    if current.count_ones(..) == 1 {
        if chosen.len() >= min_members && best.as_ref().is_none_or(|(b, _)| cost < *b) {
            let mut reps: Vec<usize> = chosen.iter().map(|&k| candidates[k].rep).collect();
            reps.sort_unstable();
            *best = Some((cost, reps));
        }
        return;
    }
    for (k, cand) in candidates.iter().enumerate().skip(start) {
        let total = cost + cand.cost;
        if best.as_ref().is_some_and(|(b, _)| total >= *b) {
            break;
        }
        let mut next = current.clone();
        next.intersect_with(&cand.core);
        if next == *current {
            continue;
        }
        chosen.push(k);
        search(candidates, k + 1, &next, total, chosen, min_members, best);
        chosen.pop();
    }
}

struct Ctx<'a> {
    n: usize,
    table: &'a [u32],
    inverse: &'a [u32],
}

impl Ctx<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    fn closure(&self, gens: &[u32]) -> FixedBitSet {
        let mut start = FixedBitSet::with_capacity(self.n);
        start.insert(0);
        self.closure_from(&start, gens)
    }

    /// Closure of `base ∪ gens` where `base` is already a subgroup.
    fn closure_from(&self, base: &FixedBitSet, gens: &[u32]) -> FixedBitSet {
        let mut set = base.clone();
        let mut frontier: Vec<u32> = base.ones().map(|x| x as u32).collect();
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(s, x);
                if !set.put(y as usize) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn conjugate(&self, set: &FixedBitSet, g: u32) -> FixedBitSet {
        let inv = self.inverse[g as usize];
        let mut out = FixedBitSet::with_capacity(self.n);
        for x in set.ones() {
            out.insert(self.mul(self.mul(g, x as u32), inv) as usize);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(gens: &[&str], n: usize) -> PermutationGroup {
        PermutationGroup::generate(
            gens.iter()
                .map(|s| Permutation::parse_cycles(s, n).unwrap())
                .collect(),
            n,
        )
        .unwrap()
    }

    /// Every subset of a tiny group that is closed under products.
    fn brute_force_subgroup_count(group: &PermutationGroup) -> usize {
        let els = group.elements().unwrap();
        let n = els.len();
        assert!(n <= 12);
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let closed = (0..n).filter(|&i| mask >> i & 1 == 1).all(|i| {
                (0..n).filter(|&j| mask >> j & 1 == 1).all(|j| {
                    let prod = els[i].compose_unchecked(&els[j]);
                    let k = els.binary_search(&prod).unwrap();
                    mask >> k & 1 == 1
                })
            });
            if closed {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn lattice_sizes_match_brute_force() {
        let s3 = grp(&["(0 1)", "(0 1 2)"], 3);
        let d4 = grp(&["(0 1 2 3)", "(1 3)"], 4);
        let c5 = grp(&["(0 1 2 3 4)"], 5);
        let a4 = grp(&["(0 1 2)", "(0 1)(2 3)"], 4);
        assert_eq!(s3.subgroup_lattice().unwrap().len(), 6);
        assert_eq!(d4.subgroup_lattice().unwrap().len(), 10);
        assert_eq!(c5.subgroup_lattice().unwrap().len(), 2);
        for g in [&s3, &d4, &c5, &a4] {
            assert_eq!(g.subgroup_lattice().unwrap().len(), brute_force_subgroup_count(g));
        }
    }

    #[test]
    fn s3_classes() {
        let s3 = grp(&["(0 1)", "(0 1 2)"], 3);
        let lat = s3.subgroup_lattice().unwrap();
        let mut sizes: Vec<usize> = lat.classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 1, 3]);
    }

    #[test]
    fn lagrange_and_core_normality() {
        let s4 = grp(&["(0 1)", "(0 1 2 3)"], 4);
        let lat = s4.subgroup_lattice().unwrap();
        assert_eq!(lat.len(), 30);
        for i in 0..lat.len() {
            assert_eq!(24 % lat.order(i), 0);
            let core = lat.core_index(i);
            assert!(lat.is_normal(core));
            assert_eq!(lat.subgroup(core), s4.core_of(&lat.subgroup(i)).unwrap());
        }
    }

    #[test]
    fn md_stabilizers_of_s4() {
        let s4 = grp(&["(0 1)", "(0 1 2 3)"], 4);
        let lat = s4.subgroup_lattice().unwrap();
        let orders: Vec<usize> = lat.md_stabilizer_indices().iter().map(|&i| lat.order(i)).collect();
        // C4, the non-normal Klein group and S3; D4 has core V4 so is excluded
        assert_eq!(orders, vec![4, 4, 6]);
        let stab = s4.point_stabilizer(0).unwrap();
        assert!(lat.is_md_representation(&stab));
        let d4 = s4
            .subgroup_generated(&[
                Permutation::parse_cycles("(0 1 2 3)", 4).unwrap(),
                Permutation::parse_cycles("(0 2)", 4).unwrap(),
            ])
            .unwrap();
        assert!(!lat.is_md_representation(&d4));
    }

    #[test]
    fn md_stabilizers_of_d4_are_reflections() {
        let d4 = grp(&["(0 1 2 3)", "(1 3)"], 4);
        let lat = d4.subgroup_lattice().unwrap();
        let md = lat.md_stabilizers();
        // two classes of non-central reflections, each order 2 and core-free
        assert_eq!(md.len(), 2);
        assert!(md.iter().all(|h| h.order() == 2));
        let refl = d4.point_stabilizer(0).unwrap();
        assert!(lat.is_md_representation(&refl));
        let center = d4
            .subgroup_generated(&[Permutation::parse_cycles("(0 2)(1 3)", 4).unwrap()])
            .unwrap();
        assert!(!lat.is_md_representation(&center));
    }

    #[test]
    fn simple_group_md_are_maximal() {
        let a5 = grp(&["(0 1 2 3 4)", "(0 1 2)"], 5);
        let lat = a5.subgroup_lattice().unwrap();
        assert_eq!(lat.len(), 59);
        assert_eq!(lat.md_stabilizer_indices(), lat.core_free_maximal_indices());
        let mut orders: Vec<usize> = lat.md_stabilizer_indices().iter().map(|&i| lat.order(i)).collect();
        orders.sort();
        assert_eq!(orders, vec![6, 10, 12]);
    }

    #[test]
    fn faithful_degrees() {
        let v4 = grp(&["(0 1)(2 3)", "(0 2)(1 3)"], 4);
        let fd = v4.subgroup_lattice().unwrap().minimal_faithful_degree();
        assert_eq!(fd.degree, 4);
        assert_eq!(fd.collection.len(), 2);

        let s4 = grp(&["(0 1)", "(0 1 2 3)"], 4);
        assert_eq!(s4.subgroup_lattice().unwrap().minimal_faithful_degree().degree, 4);

        let c6 = grp(&["(0 1 2 3 4 5)"], 6);
        let fd = c6.subgroup_lattice().unwrap().minimal_faithful_degree();
        assert_eq!(fd.degree, 5);
        assert_eq!(fd.transitive.map(|t| t.0), Some(6));
        assert_eq!(fd.intransitive.as_ref().map(|t| t.0), Some(5));

        let trivial = PermutationGroup::trivial(1);
        assert_eq!(trivial.subgroup_lattice().unwrap().minimal_faithful_degree().degree, 1);
    }

    #[test]
    fn lattice_cap() {
        let caps = super::super::Caps {
            lattice: 10,
            ..Default::default()
        };
        let s4 = PermutationGroup::generate_with_caps(
            vec![
                Permutation::parse_cycles("(0 1)", 4).unwrap(),
                Permutation::parse_cycles("(0 1 2 3)", 4).unwrap(),
            ],
            4,
            caps,
        )
        .unwrap();
        assert!(matches!(s4.subgroup_lattice(), Err(Error::CapExceeded { cap: 10, .. })));
    }
}
