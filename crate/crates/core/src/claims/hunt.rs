use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::checks::collection_text;
use super::{parse_subgroup, timed, ClaimId, ClaimReport, Outcome};
use crate::catalog::{point_stabilizer_is_md, CatalogEntry};
use crate::error::Result;
use crate::group::PermutationGroup;
use crate::norbit::{n_orbit, n_orbits_isomorphic_with_budget, IsoVerdict, DEFAULT_NODE_BUDGET};

/// Where a structural flag came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    Declared,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::Declared => "declared",
        })
    }
}

#[derive(Clone, Debug)]
pub struct HuntMember<'a> {
    pub entry: &'a CatalogEntry,
    pub md: Provenance,
}

/// Primitive md groups sharing a degree and an order.
#[derive(Clone, Debug)]
pub struct HuntBucket<'a> {
    pub degree: usize,
    pub order: u128,
    pub members: Vec<HuntMember<'a>>,
}

impl HuntBucket<'_> {
    pub fn pair_count(&self) -> usize {
        let k = self.members.len();
        k * k.saturating_sub(1) / 2
    }
}

/// Groups of degree at most `degree_max` that are primitive (and non-abelian)
/// with an md point stabilizer, bucketed by `(degree, order)` in ascending
/// order. Members keep catalog order. The md flag falls back to the
/// `md-declared` tag when the lattice is out of reach.
pub fn hunt_buckets(entries: &[CatalogEntry], degree_max: usize) -> Vec<HuntBucket<'_>> {
    let mut buckets: BTreeMap<(usize, u128), Vec<HuntMember<'_>>> = BTreeMap::new();
    for entry in entries {
        let g = entry.group();
        if g.degree() > degree_max || !g.is_primitive_non_abelian() {
            continue;
        }
        let md = match point_stabilizer_is_md(g) {
            Some(true) => Provenance::Computed,
            Some(false) => continue,
            None if entry.spec().has_tag("md-declared") => Provenance::Declared,
            None => continue,
        };
        buckets
            .entry((g.degree(), g.order()))
            .or_default()
            .push(HuntMember { entry, md });
    }
    buckets
        .into_iter()
        .map(|((degree, order), members)| HuntBucket {
            degree,
            order,
            members,
        })
        .collect()
}

fn pair_verdict(a: &PermutationGroup, b: &PermutationGroup, budget: u64) -> Result<IsoVerdict> {
    Ok(n_orbits_isomorphic_with_budget(&n_orbit(a)?, &n_orbit(b)?, budget))
}

/// Compares every pair of a bucket. Any non-isomorphic pair fails the claim.
pub fn evaluate_bucket(bucket: &HuntBucket<'_>, budget: u64) -> ClaimReport {
    let ids: Vec<&str> = bucket.members.iter().map(|m| m.entry.id()).collect();
    let group_id = ids.join(",");
    timed(ClaimId::Hunt, &group_id, || {
        let label = format!("degree {} order {}", bucket.degree, bucket.order);
        let mut notes: Vec<String> = bucket
            .members
            .iter()
            .map(|m| format!("{}: primitive computed, md {}", m.entry.id(), m.md))
            .collect();
        let mut failed: Option<String> = None;
        let mut undecided = 0;
        for (i, a) in bucket.members.iter().enumerate() {
            for b in &bucket.members[i + 1..] {
                let (x, y) = (a.entry.id(), b.entry.id());
                match pair_verdict(a.entry.group(), b.entry.group(), budget) {
                    Ok(IsoVerdict::Isomorphic(s)) => notes.push(format!("{x} ~ {y} via {s}")),
                    Ok(IsoVerdict::NotIsomorphic(why)) => {
                        notes.push(format!("{x} !~ {y}: {why}"));
                        failed.get_or_insert(format!("{x} !~ {y}"));
                    }
                    Ok(IsoVerdict::Undecided { nodes }) => {
                        notes.push(format!("{x} ? {y}: undecided after {nodes} nodes"));
                        undecided += 1;
                    }
                    Err(e) => {
                        notes.push(format!("{x} ? {y}: {e}"));
                        undecided += 1;
                    }
                }
            }
        }
        let pairs = bucket.pair_count();
        let mut out = match (failed, undecided) {
            (Some(w), _) => Outcome::fails(w, format!("{label}: non-isomorphic n-orbits")),
            (None, 0) if pairs == 0 => Outcome::holds(format!("{label}: single member, holds vacuously")),
            (None, 0) => Outcome::holds(format!("{label}: all {pairs} pair(s) isomorphic")),
            (None, u) => Outcome::undecided(format!("{label}: {u} of {pairs} pair(s) undecided")),
        };
        out.notes.append(&mut notes);
        out
    })
}

pub fn hunt_hypothesis(entries: &[CatalogEntry], degree_max: usize) -> Vec<ClaimReport> {
    hunt_buckets(entries, degree_max)
        .iter()
        .map(|b| evaluate_bucket(b, DEFAULT_NODE_BUDGET))
        .collect()
}

/// Re-checks a hunt failure: `Ok(true)` when the pair is again found
/// non-isomorphic.
pub fn reverify_pair(a: &PermutationGroup, b: &PermutationGroup) -> Result<bool> {
    Ok(matches!(
        pair_verdict(a, b, DEFAULT_NODE_BUDGET)?,
        IsoVerdict::NotIsomorphic(_)
    ))
}

/// Entries tagged `dp-factor`, as unordered pairs with repetition in catalog
/// order.
pub fn direct_product_pairs(entries: &[CatalogEntry]) -> Vec<(&CatalogEntry, &CatalogEntry)> {
    let factors: Vec<&CatalogEntry> = entries
        .iter()
        .filter(|e| e.spec().has_tag("dp-factor"))
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            pairs.push((*a, *b));
        }
    }
    pairs
}

fn direct_product(g: &PermutationGroup, h: &PermutationGroup) -> Result<Outcome> {
    let p = g.direct_product(h)?;
    let lattice = p.subgroup_lattice()?;
    let fd = lattice.minimal_faithful_degree();
    let mut out = match (&fd.intransitive, fd.transitive) {
        (Some((di, members)), t) if t.is_none_or(|(dt, _)| dt >= *di) => {
            let mut o = Outcome::holds(format!(
                "minimal faithful degree {di} is achieved by an intransitive collection of {} subgroups",
                members.len()
            ))
            .with_witness(collection_text(&lattice, members));
            if let Some((dt, _)) = t.filter(|(dt, _)| dt == di) {
                o = o.note(format!("a transitive faithful action of the same degree {dt} also exists"));
            }
            o
        }
        (i, Some((dt, a))) => Outcome::fails(
            lattice.subgroup(a).to_string(),
            match i {
                Some((di, _)) => format!("transitive degree {dt} beats every intransitive collection ({di})"),
                None => format!("only transitive faithful actions found, best degree {dt}"),
            },
        ),
        _ => Outcome::undecided("no faithful collection found"),
    };
    if let Some((dt, _)) = fd.transitive {
        out = out.note(format!("best transitive degree {dt}"));
    }
    Ok(out)
}

/// Minimal faithful degree of `G × H` on disjoint points, compared between
/// intransitive collections and single transitive actions.
pub fn check_direct_product(
    g_id: &str,
    g: &PermutationGroup,
    h_id: &str,
    h: &PermutationGroup,
) -> ClaimReport {
    timed(ClaimId::DirectProduct, &format!("{g_id}x{h_id}"), || {
        direct_product(g, h).unwrap_or_else(|e| Outcome::undecided(e.to_string()))
    })
}

/// The witness is a transitive core-free subgroup of the product; the failure
/// reproduces if its index is below every intransitive collection.
pub(super) fn reverify_direct_product(p: &PermutationGroup, witness: &str) -> Result<bool> {
    let a = parse_subgroup(p, witness)?;
    if !p.core_of(&a)?.is_trivial() {
        return Ok(false);
    }
    let fd = p.subgroup_lattice()?.minimal_faithful_degree();
    Ok(fd
        .intransitive
        .is_none_or(|(di, _)| a.index() < di as u128))
}
