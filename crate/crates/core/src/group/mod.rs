//! Permutation groups: generation, orbits, stabilizers, normality and cores.
//!
//! A [`PermutationGroup`] always carries a stabilizer chain, so order and
//! membership never need the full element list. Operations that filter or
//! intersect element sets materialize the sorted element list on first use,
//! subject to [`Caps::elements`].

mod blocks;
mod chain;
mod cosets;
mod lattice;
mod subgroup;

use std::collections::{BTreeSet, HashSet};
use std::sync::{Arc, OnceLock};

pub use blocks::BlockSystem;
pub use chain::StabilizerChain;
pub use cosets::{Coset, CosetAction};
pub use lattice::{AutomorphicMode, AutomorphicNumbers, FaithfulDegree, SubgroupLattice};
pub use subgroup::Subgroup;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Size limits for the operations that enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group whose element list is materialized.
    pub elements: usize,
    /// Largest group whose subgroup lattice is built.
    pub lattice: usize,
    /// Largest index accepted by coset actions.
    pub coset_index: usize,
    /// Backtrack node budget for n-orbit isomorphism.
    pub nodes: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: 200_000,
            lattice: 500,
            coset_index: 10_000,
            nodes: 1_000_000,
        }
    }
}

#[derive(Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
    caps: Caps,
    elements: OnceLock<Arc<Vec<Permutation>>>,
    lattice: OnceLock<Result<Arc<SubgroupLattice>>>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: self.chain.clone(),
            caps: self.caps,
            elements: self.elements.clone(),
            lattice: OnceLock::new(),
        }
    }
}

impl PermutationGroup {
    /// The group generated by `generators` on `degree` points, with default caps.
    pub fn generate(generators: Vec<Permutation>, degree: usize) -> Result<Self> {
        Self::generate_with_caps(generators, degree, Caps::default())
    }

    pub fn generate_with_caps(
        generators: Vec<Permutation>,
        degree: usize,
        caps: Caps,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let chain = StabilizerChain::new(degree, &generators);
        Ok(PermutationGroup {
            degree,
            generators,
            chain,
            caps,
            elements: OnceLock::new(),
            lattice: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(Vec::new(), degree).expect("positive degree")
    }

    /// Builds a group from an element list already known to be closed.
    pub(crate) fn from_sorted_elements(
        elements: Vec<Permutation>,
        generators: Vec<Permutation>,
        caps: Caps,
    ) -> Self {
        let degree = elements[0].degree();
        let chain = StabilizerChain::new(degree, &generators);
        debug_assert_eq!(chain.order(), elements.len() as u128);
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(elements));
        PermutationGroup {
            degree,
            generators,
            chain,
            caps,
            elements: cell,
            lattice: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, a)| {
            gens[i + 1..]
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    /// Sorted element list; errors if the order exceeds the element cap.
    pub fn elements(&self) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let order = self.order();
        if order > self.caps.elements as u128 {
            return Err(Error::CapExceeded {
                what: "element materialization",
                needed: order,
                cap: self.caps.elements as u128,
            });
        }
        let mut elements = self.chain.enumerate();
        elements.sort_unstable();
        Ok(self.elements.get_or_init(|| Arc::new(elements)))
    }

    /// Position of `g` in the sorted element list.
    pub fn index_of(&self, g: &Permutation) -> Result<Option<usize>> {
        Ok(self.elements()?.binary_search(g).ok())
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits as sorted point lists, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for v in 0..self.degree {
            if seen[v] {
                continue;
            }
            let orbit = self.orbit(v);
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    pub fn point_stabilizer(&self, v: usize) -> Result<Subgroup> {
        self.check_point(v)?;
        self.filter_subgroup(|g| g.apply(v) == v)
    }

    /// `{g : g(U) = U}` for a nonempty point set `U`.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> Result<Subgroup> {
        if set.is_empty() {
            return Err(Error::InvalidBlockSystem("empty point set".into()));
        }
        let mut member = vec![false; self.degree];
        for &x in set {
            self.check_point(x)?;
            member[x] = true;
        }
        self.filter_subgroup(|g| set.iter().all(|&x| member[g.apply(x)]))
    }

    /// Subgroup of all elements satisfying `keep`; `keep` must define a subgroup.
    pub(crate) fn filter_subgroup(&self, keep: impl Fn(&Permutation) -> bool) -> Result<Subgroup> {
        let elements: Vec<Permutation> = self.elements()?.iter().filter(|g| keep(g)).cloned().collect();
        Ok(Subgroup::from_sorted_elements(elements, self.order()))
    }

    /// The whole group as a subgroup of itself.
    pub fn as_subgroup(&self) -> Result<Subgroup> {
        Ok(Subgroup::from_sorted_elements(
            self.elements()?.to_vec(),
            self.order(),
        ))
    }

    /// The subgroup of `self` generated by `generators`.
    pub fn subgroup_generated(&self, generators: &[Permutation]) -> Result<Subgroup> {
        for g in generators {
            if !self.contains(g) {
                return Err(Error::NotSubgroup(format!("{g} is not a group element")));
            }
        }
        let elements = closure(self.degree, generators, self.caps.elements)?;
        Ok(Subgroup::from_sorted_elements(elements, self.order()))
    }

    /// `H` is normal iff conjugating its generators by the group generators stays in `H`.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.generators.iter().all(|g| {
            h.generators()
                .iter()
                .all(|x| h.contains(&x.conjugate_by(g)))
        })
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<Subgroup> {
        for s in seeds {
            if !self.contains(s) {
                return Err(Error::NotSubgroup(format!("{s} is not a group element")));
            }
        }
        let mut gens: Vec<Permutation> = seeds.iter().filter(|s| !s.is_identity()).cloned().collect();
        loop {
            let current = Subgroup::from_sorted_elements(
                closure(self.degree, &gens, self.caps.elements)?,
                self.order(),
            );
            let missing = gens.iter().find_map(|x| {
                self.generators
                    .iter()
                    .map(|g| x.conjugate_by(g))
                    .find(|c| !current.contains(c))
            });
            match missing {
                Some(c) => gens.push(c),
                None => return Ok(current),
            }
        }
    }

    /// Conjugacy classes of elements, each sorted, ordered by their minimum.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<Permutation>>> {
        let elements = self.elements()?;
        let mut seen: HashSet<&Permutation> = HashSet::new();
        let mut classes = Vec::new();
        for x in elements {
            if seen.contains(x) {
                continue;
            }
            let mut class = vec![x.clone()];
            let mut members: HashSet<Permutation> = HashSet::from([x.clone()]);
            let mut i = 0;
            while i < class.len() {
                for g in &self.generators {
                    let c = class[i].conjugate_by(g);
                    if members.insert(c.clone()) {
                        class.push(c);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            for c in &class {
                let pos = elements.binary_search(c).expect("conjugates stay in the group");
                seen.insert(&elements[pos]);
            }
            classes.push(class);
        }
        Ok(classes)
    }

    /// Nontrivial, and the normal closure of every non-identity element is the
    /// whole group. One element per conjugacy class is enough.
    pub fn is_simple(&self) -> Result<bool> {
        if self.is_trivial() {
            return Ok(false);
        }
        for class in self.conjugacy_classes()? {
            if class[0].is_identity() {
                continue;
            }
            if (self.normal_closure(&class[..1])?.order() as u128) < self.order() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest normal subgroup of `self` contained in `a`, as the intersection of
    /// `g A g⁻¹` over one `g` per left coset of `A`.
    pub fn core_of(&self, a: &Subgroup) -> Result<Subgroup> {
        self.check_subgroup(a)?;
        let mut core: BTreeSet<Permutation> = a.elements().iter().cloned().collect();
        for coset in cosets::left_cosets(self, a)? {
            if core.len() == 1 {
                break;
            }
            let g = coset.representative();
            let conj: HashSet<Permutation> = a.elements().iter().map(|x| x.conjugate_by(g)).collect();
            core.retain(|x| conj.contains(x));
        }
        Ok(Subgroup::from_sorted_elements(core.into_iter().collect(), self.order()))
    }

    pub fn left_cosets(&self, a: &Subgroup) -> Result<Vec<Coset>> {
        self.check_subgroup(a)?;
        cosets::left_cosets(self, a)
    }

    pub fn right_cosets(&self, a: &Subgroup) -> Result<Vec<Coset>> {
        self.check_subgroup(a)?;
        cosets::right_cosets(self, a)
    }

    /// Action of the group on the left cosets of `a` by left multiplication.
    pub fn coset_action(&self, a: &Subgroup) -> Result<CosetAction> {
        self.check_subgroup(a)?;
        CosetAction::new(self, a)
    }

    /// Orbits of the stabilizer of `v`, ordered by smallest point.
    pub fn suborbits(&self, v: usize) -> Result<Vec<Vec<usize>>> {
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        Ok(self.point_stabilizer(v)?.orbits(self.degree))
    }

    /// Orbit sizes of all subgroups when the lattice is available, otherwise
    /// the suborbit sizes at every point.
    pub fn automorphic_numbers(&self) -> Result<AutomorphicNumbers> {
        if let Ok(lattice) = self.subgroup_lattice() {
            let mut values = BTreeSet::new();
            for i in 0..lattice.len() {
                for orbit in lattice.subgroup(i).orbits(self.degree) {
                    values.insert(orbit.len());
                }
            }
            return Ok(AutomorphicNumbers {
                mode: AutomorphicMode::SubgroupOrbits,
                values,
            });
        }
        let mut values = BTreeSet::new();
        for v in 0..self.degree {
            for orbit in self.point_stabilizer(v)?.orbits(self.degree) {
                values.insert(orbit.len());
            }
        }
        Ok(AutomorphicNumbers {
            mode: AutomorphicMode::Suborbits,
            values,
        })
    }

    /// Subgroup lattice (cached); errors if the order exceeds the lattice cap.
    pub fn subgroup_lattice(&self) -> Result<Arc<SubgroupLattice>> {
        self.lattice
            .get_or_init(|| SubgroupLattice::build(self).map(Arc::new))
            .clone()
    }

    pub fn minimal_block_systems(&self) -> Result<Vec<BlockSystem>> {
        blocks::minimal_block_systems(self)
    }

    /// Transitive with no nontrivial block system.
    pub fn is_primitive(&self) -> bool {
        self.is_transitive()
            && self
                .minimal_block_systems()
                .map(|s| s.is_empty())
                .unwrap_or(false)
    }

    /// Primitive and non-abelian, the convention for "primitive group" in the
    /// claim checks.
    pub fn is_primitive_non_abelian(&self) -> bool {
        self.is_primitive() && !self.is_abelian()
    }

    /// `Stab(Q)`: elements mapping every block of `q` onto itself.
    pub fn block_kernel(&self, q: &BlockSystem) -> Result<Subgroup> {
        if q.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: q.degree(),
            });
        }
        if let Some(g) = self.generators.iter().find(|g| !q.is_invariant_under(g)) {
            return Err(Error::NotInvariant {
                generator: g.to_string(),
            });
        }
        let block_of = q.block_index();
        self.filter_subgroup(|g| (0..self.degree).all(|x| block_of[g.apply(x)] == block_of[x]))
    }

    /// `∩ Stab(U)` over the blocks `U` of `q`, by explicit set intersection.
    pub fn block_kernel_by_intersection(&self, q: &BlockSystem) -> Result<Subgroup> {
        let mut current: Option<BTreeSet<Permutation>> = None;
        for block in q.blocks() {
            let stab = self.setwise_stabilizer(block)?;
            let set: BTreeSet<Permutation> = stab.elements().iter().cloned().collect();
            current = Some(match current {
                None => set,
                Some(c) => c.intersection(&set).cloned().collect(),
            });
        }
        let elements = current.unwrap_or_default().into_iter().collect();
        Ok(Subgroup::from_sorted_elements(elements, self.order()))
    }

    /// Direct product acting on disjoint point sets, `self` first.
    pub fn direct_product(&self, other: &PermutationGroup) -> Result<PermutationGroup> {
        let left_id = self.identity();
        let right_id = other.identity();
        let mut gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| g.direct_sum(&right_id))
            .collect();
        gens.extend(other.generators.iter().map(|h| left_id.direct_sum(h)));
        PermutationGroup::generate_with_caps(gens, self.degree + other.degree, self.caps)
    }

    fn check_point(&self, v: usize) -> Result<()> {
        if v >= self.degree {
            return Err(Error::PointOutOfRange {
                point: v,
                degree: self.degree,
            });
        }
        Ok(())
    }

    fn check_subgroup(&self, a: &Subgroup) -> Result<()> {
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: a.degree(),
            });
        }
        if let Some(g) = a.generators().iter().find(|g| !self.contains(g)) {
            return Err(Error::NotSubgroup(format!("{g} is not a group element")));
        }
        Ok(())
    }
}

/// Brute-force closure of `generators` by breadth-first multiplication,
/// returned sorted. Independent of the stabilizer chain.
pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = g.compose(&x)?;
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "closure",
                        needed: seen.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}
