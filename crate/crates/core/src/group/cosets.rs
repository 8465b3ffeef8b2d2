use std::collections::{HashMap, HashSet};

use super::{PermutationGroup, Subgroup};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One coset, as its sorted element list. The representative is the minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    elements: Vec<Permutation>,
}

impl Coset {
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn representative(&self) -> &Permutation {
        &self.elements[0]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn check_index(group: &PermutationGroup, a: &Subgroup) -> Result<()> {
    let index = group.order() / a.order() as u128;
    let cap = group.caps().coset_index as u128;
    if index > cap {
        return Err(Error::CapExceeded {
            what: "coset index",
            needed: index,
            cap,
        });
    }
    Ok(())
}

fn cosets_by(
    group: &PermutationGroup,
    a: &Subgroup,
    product: impl Fn(&Permutation, &Permutation) -> Permutation,
) -> Result<Vec<Coset>> {
    check_index(group, a)?;
    let mut assigned: HashSet<&Permutation> = HashSet::new();
    let mut out = Vec::new();
    let elements = group.elements()?;
    for g in elements {
        if assigned.contains(g) {
            continue;
        }
        let mut coset: Vec<Permutation> = a.elements().iter().map(|x| product(g, x)).collect();
        coset.sort_unstable();
        for x in &coset {
            let pos = elements.binary_search(x).expect("coset lies in the group");
            assigned.insert(&elements[pos]);
        }
        out.push(Coset { elements: coset });
    }
    Ok(out)
}

/// Left cosets `gA` ordered by their minimal element; `A` itself comes first.
pub(crate) fn left_cosets(group: &PermutationGroup, a: &Subgroup) -> Result<Vec<Coset>> {
    cosets_by(group, a, |g, x| g.compose_unchecked(x))
}

/// Right cosets `Ag`, same ordering rule.
pub(crate) fn right_cosets(group: &PermutationGroup, a: &Subgroup) -> Result<Vec<Coset>> {
    cosets_by(group, a, |g, x| x.compose_unchecked(g))
}

/// The action `f · gA = (fg)A` on the ordered left cosets of `A`.
#[derive(Debug)]
pub struct CosetAction {
    subgroup: Subgroup,
    cosets: Vec<Coset>,
    coset_of: HashMap<Permutation, usize>,
    generator_images: Vec<Permutation>,
    image: PermutationGroup,
    kernel: Subgroup,
}

impl CosetAction {
    pub(crate) fn new(group: &PermutationGroup, a: &Subgroup) -> Result<Self> {
        let cosets = left_cosets(group, a)?;
        let mut coset_of = HashMap::with_capacity(group.order() as usize);
        for (i, c) in cosets.iter().enumerate() {
            for x in c.elements() {
                coset_of.insert(x.clone(), i);
            }
        }
        let act = |f: &Permutation| -> Permutation {
            let images = cosets
                .iter()
                .map(|c| coset_of[&f.compose_unchecked(c.representative())])
                .collect();
            Permutation::from_images(images).expect("action permutes cosets")
        };
        let generator_images: Vec<Permutation> = group.generators().iter().map(act).collect();
        let kernel_elements: Vec<Permutation> = group
            .elements()?
            .iter()
            .filter(|f| act(f).is_identity())
            .cloned()
            .collect();
        let kernel = Subgroup::from_sorted_elements(kernel_elements, group.order());
        let image = PermutationGroup::generate_with_caps(
            generator_images.clone(),
            cosets.len(),
            group.caps(),
        )?;
        Ok(CosetAction {
            subgroup: a.clone(),
            cosets,
            coset_of,
            generator_images,
            image,
            kernel,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    /// Images of the parent group's generators, in generator order.
    pub fn generator_images(&self) -> &[Permutation] {
        &self.generator_images
    }

    pub fn image(&self) -> &PermutationGroup {
        &self.image
    }

    /// Elements acting trivially on every coset, found by direct filtering.
    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The permutation of cosets induced by `f`.
    pub fn act(&self, f: &Permutation) -> Option<Permutation> {
        let images: Option<Vec<usize>> = self
            .cosets
            .iter()
            .map(|c| f.compose(c.representative()).ok().and_then(|x| self.coset_of.get(&x).copied()))
            .collect();
        Permutation::from_images(images?).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    fn grp(gens: &[&str], n: usize) -> PermutationGroup {
        PermutationGroup::generate(gens.iter().map(|s| p(s, n)).collect(), n).unwrap()
    }

    #[test]
    fn s4_on_dihedral_cosets() {
        let s4 = grp(&["(0 1)", "(0 1 2 3)"], 4);
        let d4 = s4.subgroup_generated(&[p("(0 1 2 3)", 4), p("(0 2)", 4)]).unwrap();
        let action = s4.coset_action(&d4).unwrap();
        assert_eq!(action.index(), 3);
        assert_eq!(action.image().order(), 6);
        assert_eq!(action.kernel().order(), 4);
        assert_eq!(action.kernel(), &s4.core_of(&d4).unwrap());
        assert_eq!(action.cosets()[0].elements(), d4.elements());
    }

    #[test]
    fn regular_action_on_trivial_subgroup() {
        let s3 = grp(&["(0 1)", "(0 1 2)"], 3);
        let trivial = s3.subgroup_generated(&[]).unwrap();
        let action = s3.coset_action(&trivial).unwrap();
        assert_eq!(action.index(), 6);
        assert_eq!(action.image().order(), 6);
        assert!(action.image().is_transitive());
        assert!(action.kernel().is_trivial());
    }

    #[test]
    fn frobenius_on_point_stabilizer_cosets() {
        let f21 = grp(&["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"], 7);
        let stab = f21.point_stabilizer(0).unwrap();
        let action = f21.coset_action(&stab).unwrap();
        assert_eq!(action.index(), 7);
        assert!(action.kernel().is_trivial());
        // coset i is {g : g(0) = i}, so the action is the natural one
        for g in f21.elements().unwrap() {
            assert_eq!(&action.act(g).unwrap(), g);
        }
    }

    #[test]
    fn left_and_right_cosets_partition() {
        let s4 = grp(&["(0 1)", "(0 1 2 3)"], 4);
        let a = s4.subgroup_generated(&[p("(0 1)", 4)]).unwrap();
        for cosets in [s4.left_cosets(&a).unwrap(), s4.right_cosets(&a).unwrap()] {
            assert_eq!(cosets.len(), 12);
            assert!(cosets.iter().all(|c| c.len() == 2));
            let mut all: Vec<Permutation> = cosets.iter().flat_map(|c| c.elements().to_vec()).collect();
            all.sort();
            assert_eq!(all, s4.elements().unwrap());
            assert_eq!(cosets[0].elements(), a.elements());
        }
    }

    #[test]
    fn index_cap() {
        let caps = super::super::Caps {
            coset_index: 5,
            ..Default::default()
        };
        let s3 = PermutationGroup::generate_with_caps(vec![p("(0 1)", 3), p("(0 1 2)", 3)], 3, caps).unwrap();
        let trivial = s3.subgroup_generated(&[]).unwrap();
        assert!(matches!(s3.coset_action(&trivial), Err(Error::CapExceeded { .. })));
    }
}
