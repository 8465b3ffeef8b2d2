use std::collections::BTreeSet;

use super::{GroupSpec, Source};
use crate::error::{Error, Result};
use crate::group::{Caps, PermutationGroup};
use crate::perm::Permutation;

pub const MAX_ENUMERATION_DEGREE: usize = 6;

fn symmetric_group(d: usize, caps: Caps) -> Result<PermutationGroup> {
    let mut gens = Vec::new();
    if d > 1 {
        gens.push(Permutation::from_cycles(d, &[vec![0, 1]])?);
        gens.push(Permutation::from_cycles(d, &[(0..d).collect()])?);
    }
    PermutationGroup::generate_with_caps(gens, d, caps)
}

/// Transitive subgroups of `S_d` up to conjugacy, ordered by group order and
/// then by the position of the class in the lattice of `S_d`.
///
/// Ids are `T{d}-{k}` with `k` counting from 1.
pub fn enumerate_transitive(d: usize) -> Result<Vec<GroupSpec>> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if d > MAX_ENUMERATION_DEGREE {
        return Err(Error::CapExceeded {
            what: "transitive enumeration degree",
            needed: d as u128,
            cap: MAX_ENUMERATION_DEGREE as u128,
        });
    }
    let factorial: usize = (1..=d).product();
    let caps = Caps {
        lattice: factorial.max(Caps::default().lattice),
        ..Caps::default()
    };
    let sd = symmetric_group(d, caps)?;
    let lattice = sd.subgroup_lattice()?;
    let mut out = Vec::new();
    // lattice classes are conjugacy classes under S_d
    for rep in lattice.class_representatives() {
        let h = lattice.subgroup(rep);
        if !h.is_transitive() {
            continue;
        }
        let mut generators = h.generators().to_vec();
        if generators.is_empty() {
            generators.push(Permutation::identity(d));
        }
        out.push(GroupSpec {
            id: format!("T{d}-{}", out.len() + 1),
            degree: d,
            generators,
            tags: BTreeSet::from([format!("order={}", h.order())]),
            source: Source::Enumerated,
        });
    }
    Ok(out)
}
