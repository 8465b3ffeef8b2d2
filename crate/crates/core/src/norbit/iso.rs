//! Isomorphism of n-orbits, read as conjugacy of the represented groups in `S_n`.
//!
//! Cheap invariants are compared first: cycle-type multiset, orbit sizes and
//! the multiset of suborbit-size profiles. If they agree, a backtrack searches
//! for `σ` with `σ X σ⁻¹ = Y`. It picks a small generating set `g₁, …, g_k`
//! of `X` (rarest cycle types first), chooses an image `yᵢ ∈ Y` of matching
//! cycle type for each, and after every choice checks that some bijection
//! `σ` satisfies `σ(gᵢ(x)) = yᵢ(σ(x))` for all chosen pairs. The bijection is
//! built orbit by orbit of `⟨g₁, …, gᵢ⟩`, propagating from one base image.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::NOrbitMatrix;
use crate::perm::{CycleType, Permutation};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `σ` conjugates the first n-orbit onto the second.
    Isomorphic(Permutation),
    /// An invariant differs or the search space was exhausted.
    NotIsomorphic(String),
    /// The node budget ran out before a decision.
    Undecided { nodes: u64 },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&Permutation> {
        match self {
            IsoVerdict::Isomorphic(s) => Some(s),
            _ => None,
        }
    }
}

pub fn n_orbits_isomorphic(x: &NOrbitMatrix, y: &NOrbitMatrix) -> IsoVerdict {
    n_orbits_isomorphic_with_budget(x, y, DEFAULT_NODE_BUDGET)
}

pub fn n_orbits_isomorphic_with_budget(x: &NOrbitMatrix, y: &NOrbitMatrix, budget: u64) -> IsoVerdict {
    if x.degree() != y.degree() {
        return IsoVerdict::NotIsomorphic("degrees differ".into());
    }
    if x.row_count() != y.row_count() {
        return IsoVerdict::NotIsomorphic("row counts differ".into());
    }
    if let Some(reason) = invariant_mismatch(x, y) {
        return IsoVerdict::NotIsomorphic(reason);
    }
    let mut search = Search::new(x, y, budget);
    let outcome = search.run();
    match outcome {
        Ok(Some(sigma)) => IsoVerdict::Isomorphic(sigma),
        Ok(None) => IsoVerdict::NotIsomorphic("no conjugating permutation exists".into()),
        Err(BudgetExhausted) => IsoVerdict::Undecided {
            nodes: search.nodes,
        },
    }
}

/// Name of the first invariant that separates `x` and `y`, if any.
pub(crate) fn invariant_mismatch(x: &NOrbitMatrix, y: &NOrbitMatrix) -> Option<String> {
    if cycle_type_multiset(x) != cycle_type_multiset(y) {
        return Some("cycle-type multisets differ".into());
    }
    if orbit_sizes(x) != orbit_sizes(y) {
        return Some("orbit sizes differ".into());
    }
    if suborbit_profiles(x) != suborbit_profiles(y) {
        return Some("suborbit-size multisets differ".into());
    }
    None
}

pub(crate) fn cycle_type_multiset(x: &NOrbitMatrix) -> BTreeMap<CycleType, usize> {
    let mut out = BTreeMap::new();
    for r in x.rows() {
        *out.entry(r.cycle_type()).or_insert(0) += 1;
    }
    out
}

fn union_orbits<'a>(n: usize, perms: impl Iterator<Item = &'a Permutation>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in perms {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, p.apply(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut out: Vec<usize> = sizes.into_values().collect();
    out.sort_unstable();
    out
}

fn orbit_sizes(x: &NOrbitMatrix) -> Vec<usize> {
    union_orbits(x.degree(), x.rows().iter())
}

fn suborbit_profiles(x: &NOrbitMatrix) -> Vec<Vec<usize>> {
    let n = x.degree();
    let mut out: Vec<Vec<usize>> = (0..n)
        .map(|v| union_orbits(n, x.rows().iter().filter(|r| r.apply(v) == v)))
        .collect();
    out.sort_unstable();
    out
}

struct BudgetExhausted;

struct Search<'a> {
    n: usize,
    x: &'a NOrbitMatrix,
    y: &'a NOrbitMatrix,
    generators: Vec<Permutation>,
    pools: Vec<Vec<&'a Permutation>>,
    chosen: Vec<&'a Permutation>,
    budget: u64,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(x: &'a NOrbitMatrix, y: &'a NOrbitMatrix, budget: u64) -> Self {
        let x_types = cycle_type_multiset(x);
        let mut by_type: HashMap<CycleType, Vec<&Permutation>> = HashMap::new();
        for r in y.rows() {
            by_type.entry(r.cycle_type()).or_default().push(r);
        }

        // rarest cycle types first keeps the candidate pools small
        let mut order: Vec<&Permutation> = x.rows().iter().filter(|r| !r.is_identity()).collect();
        order.sort_by_key(|r| (x_types[&r.cycle_type()], *r));
        let mut generated: HashSet<Permutation> = HashSet::from([Permutation::identity(x.degree())]);
        let mut generators = Vec::new();
        for r in order {
            if generated.len() == x.row_count() {
                break;
            }
            if generated.contains(r) {
                continue;
            }
            generators.push(r.clone());
            let mut frontier: Vec<Permutation> = generated.iter().cloned().collect();
            while let Some(a) = frontier.pop() {
                for g in &generators {
                    let b = g.compose_unchecked(&a);
                    if generated.insert(b.clone()) {
                        frontier.push(b);
                    }
                }
            }
        }
        let pools = generators
            .iter()
            .map(|g| by_type.get(&g.cycle_type()).cloned().unwrap_or_default())
            .collect();
        Search {
            n: x.degree(),
            x,
            y,
            generators,
            pools,
            chosen: Vec::new(),
            budget,
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<(), BudgetExhausted> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(BudgetExhausted)
        } else {
            Ok(())
        }
    }

    fn run(&mut self) -> Result<Option<Permutation>, BudgetExhausted> {
        if self.generators.is_empty() {
            // both trivial
            return Ok(Some(Permutation::identity(self.n)));
        }
        self.choose(0)
    }

    fn choose(&mut self, level: usize) -> Result<Option<Permutation>, BudgetExhausted> {
        let pool = self.pools[level].clone();
        for candidate in pool {
            self.tick()?;
            self.chosen.push(candidate);
            if let Some(sigma) = self.solve()? {
                if level + 1 == self.generators.len() {
                    if self.conjugates_onto(&sigma) {
                        return Ok(Some(sigma));
                    }
                } else if let Some(sigma) = self.choose(level + 1)? {
                    return Ok(Some(sigma));
                }
            }
            self.chosen.pop();
        }
        Ok(None)
    }

    fn conjugates_onto(&self, sigma: &Permutation) -> bool {
        self.x.rows().iter().all(|r| self.y.contains_row(&r.conjugate_by(sigma)))
    }

    /// A bijection conjugating each chosen generator onto its chosen image.
    fn solve(&mut self) -> Result<Option<Permutation>, BudgetExhausted> {
        let k = self.chosen.len();
        let gens: Vec<Permutation> = self.generators[..k].to_vec();
        let targets: Vec<Permutation> = self.chosen.iter().map(|&p| p.clone()).collect();
        let mut sigma: Vec<Option<usize>> = vec![None; self.n];
        let mut used = vec![false; self.n];
        if self.extend(&gens, &targets, &mut sigma, &mut used)? {
            let images = sigma.into_iter().map(|s| s.expect("all points assigned")).collect();
            Ok(Some(Permutation::from_images(images).expect("injective assignment")))
        } else {
            Ok(None)
        }
    }

    fn extend(
        &mut self,
        gens: &[Permutation],
        targets: &[Permutation],
        sigma: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> Result<bool, BudgetExhausted> {
        let Some(base) = sigma.iter().position(Option::is_none) else {
            return Ok(true);
        };
        for t in 0..self.n {
            if used[t] {
                continue;
            }
            self.tick()?;
            let mut assigned = Vec::new();
            if propagate(base, t, gens, targets, sigma, used, &mut assigned)
                && self.extend(gens, targets, sigma, used)?
            {
                return Ok(true);
            }
            for x in assigned {
                if let Some(v) = sigma[x].take() {
                    used[v] = false;
                }
            }
        }
        Ok(false)
    }
}

/// Sets `σ(base) = target` and follows `σ(g(x)) = y(σ(x))` through the orbit.
fn propagate(
    base: usize,
    target: usize,
    gens: &[Permutation],
    targets: &[Permutation],
    sigma: &mut [Option<usize>],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    sigma[base] = Some(target);
    used[target] = true;
    assigned.push(base);
    let mut queue = vec![base];
    while let Some(x) = queue.pop() {
        let sx = sigma[x].expect("queued points are assigned");
        for (g, y) in gens.iter().zip(targets) {
            let gx = g.apply(x);
            let want = y.apply(sx);
            match sigma[gx] {
                Some(v) if v == want => {}
                Some(_) => return false,
                None => {
                    if used[want] {
                        return false;
                    }
                    sigma[gx] = Some(want);
                    used[want] = true;
                    assigned.push(gx);
                    queue.push(gx);
                }
            }
        }
    }
    true
}
