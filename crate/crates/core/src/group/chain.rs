//! Base and strong generating set built by incremental Schreier–Sims.
//!
//! Level `k` stores its base point, the generators of the `k`-th group in the
//! stabilizer series and a transversal: `transversal[x]` maps the base point to
//! `x`. Every Schreier generator of level `k` sifts to the identity through the
//! deeper levels, so the deeper levels generate the full point stabilizer.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) base_point: usize,
    generators: Vec<Permutation>,
    pub(crate) orbit: Vec<usize>,
    pub(crate) transversal: Vec<Option<Permutation>>,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    pub(crate) levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for g in generators {
            if let Some(residue) = chain.sift_from(0, g) {
                chain.extend(0, residue);
            }
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Sizes of the fundamental orbits, one per base point.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(0, g).is_none()
    }

    /// Strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for level in &self.levels {
            for g in &level.generators {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Every group element, produced as products of transversal elements.
    pub fn enumerate(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &x in &level.orbit {
                let u = level.transversal[x].as_ref().expect("orbit point has transversal");
                for h in &out {
                    next.push(u.compose_unchecked(h));
                }
            }
            out = next;
        }
        out
    }

    /// Sifts `g` starting at `level`; returns the non-identity residue if `g`
    /// is not in the group generated by the levels from there down.
    fn sift_from(&self, start: usize, g: &Permutation) -> Option<Permutation> {
        let mut h = g.clone();
        for level in &self.levels[start..] {
            let x = h.apply(level.base_point);
            match &level.transversal[x] {
                Some(u) => h = u.inverse().compose_unchecked(&h),
                None => return Some(h),
            }
        }
        if h.is_identity() {
            None
        } else {
            Some(h)
        }
    }

    fn extend(&mut self, k: usize, g: Permutation) {
        if k == self.levels.len() {
            let base_point = g
                .first_moved()
                .expect("only non-identity residues are added");
            let mut transversal = vec![None; self.degree];
            transversal[base_point] = Some(Permutation::identity(self.degree));
            self.levels.push(Level {
                base_point,
                generators: Vec::new(),
                orbit: vec![base_point],
                transversal,
            });
        }
        self.levels[k].generators.push(g.clone());
        let new_gen = self.levels[k].generators.len() - 1;

        // Pairs (orbit point, generator index) whose Schreier generator is still untested.
        let mut pending: Vec<(usize, usize)> =
            self.levels[k].orbit.iter().map(|&x| (x, new_gen)).collect();
        while let Some((x, s)) = pending.pop() {
            let level = &self.levels[k];
            let gen = &level.generators[s];
            let y = gen.apply(x);
            let ux = level.transversal[x].as_ref().expect("orbit point");
            let image = gen.compose_unchecked(ux);
            match &level.transversal[y] {
                None => {
                    let level = &mut self.levels[k];
                    level.transversal[y] = Some(image);
                    level.orbit.push(y);
                    let gens = level.generators.len();
                    pending.extend((0..gens).map(|t| (y, t)));
                }
                Some(uy) => {
                    let schreier = uy.inverse().compose_unchecked(&image);
                    if schreier.is_identity() {
                        continue;
                    }
                    if let Some(residue) = self.sift_from(k + 1, &schreier) {
                        self.extend(k + 1, residue);
                    }
                }
            }
        }
    }
}
