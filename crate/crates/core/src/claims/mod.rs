//! Statement-level checks of the structural claims, one report per group.
//!
//! Every check has a hypothesis filter and an evaluation. [`check`] applies
//! the filter first and reports `not-applicable` with the failing predicate
//! when it rejects the group; [`evaluate_unfiltered`] skips it, which is how
//! failure paths are exercised. A `fails` report always carries a witness
//! that [`reverify`] can re-check on its own.

mod checks;
mod hunt;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

pub use hunt::{
    check_direct_product, direct_product_pairs, evaluate_bucket, hunt_buckets, hunt_hypothesis,
    reverify_pair, HuntBucket, HuntMember, Provenance,
};

use crate::error::{Error, Result};
use crate::group::{PermutationGroup, Subgroup};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    BlockKernel,
    OddPrimitive,
    FixAtMostOne,
    StabSemiregular,
    RegularSubgroup,
    Ld,
    Div4,
    Hunt,
    RegularElement,
    DirectProduct,
}

impl ClaimId {
    pub const ALL: [ClaimId; 10] = [
        ClaimId::BlockKernel,
        ClaimId::OddPrimitive,
        ClaimId::FixAtMostOne,
        ClaimId::StabSemiregular,
        ClaimId::RegularSubgroup,
        ClaimId::Ld,
        ClaimId::Div4,
        ClaimId::Hunt,
        ClaimId::RegularElement,
        ClaimId::DirectProduct,
    ];

    /// Claims decided on one group at a time.
    pub const PER_GROUP: [ClaimId; 8] = [
        ClaimId::BlockKernel,
        ClaimId::OddPrimitive,
        ClaimId::FixAtMostOne,
        ClaimId::StabSemiregular,
        ClaimId::RegularSubgroup,
        ClaimId::Ld,
        ClaimId::Div4,
        ClaimId::RegularElement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::BlockKernel => "L1-block-kernel",
            ClaimId::OddPrimitive => "T2-odd-primitive",
            ClaimId::FixAtMostOne => "L3-fix-at-most-one",
            ClaimId::StabSemiregular => "C4-stab-semiregular",
            ClaimId::RegularSubgroup => "C5-regular-subgroup",
            ClaimId::Ld => "C6-ld",
            ClaimId::Div4 => "C7-div4",
            ClaimId::Hunt => "H1-hunt",
            ClaimId::RegularElement => "P-regular-element",
            ClaimId::DirectProduct => "LD-direct-product",
        }
    }

    pub fn is_per_group(self) -> bool {
        !matches!(self, ClaimId::Hunt | ClaimId::DirectProduct)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "not-applicable",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim_id: ClaimId,
    pub group_id: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub reason: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ClaimReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Verdict, witness, reason and notes before the report is stamped.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub reason: String,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new(verdict: Verdict, reason: impl Into<String>) -> Self {
        Outcome {
            verdict,
            witness: None,
            reason: reason.into(),
            notes: Vec::new(),
        }
    }

    pub fn holds(reason: impl Into<String>) -> Self {
        Outcome::new(Verdict::Holds, reason)
    }

    pub fn fails(witness: impl Into<String>, reason: impl Into<String>) -> Self {
        Outcome::new(Verdict::Fails, reason).with_witness(witness)
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Outcome::new(Verdict::NotApplicable, reason)
    }

    pub fn undecided(reason: impl Into<String>) -> Self {
        Outcome::new(Verdict::Undecided, reason)
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn into_report(self, claim: ClaimId, group_id: &str, elapsed: Duration) -> ClaimReport {
        ClaimReport {
            claim_id: claim,
            group_id: group_id.to_string(),
            verdict: self.verdict,
            witness: self.witness,
            reason: self.reason,
            notes: self.notes,
            elapsed,
        }
    }
}

pub(crate) fn timed(claim: ClaimId, group_id: &str, run: impl FnOnce() -> Outcome) -> ClaimReport {
    let start = Instant::now();
    let outcome = run();
    outcome.into_report(claim, group_id, start.elapsed())
}

/// Runs one per-group claim with its hypothesis filter.
pub fn check(claim: ClaimId, group_id: &str, g: &PermutationGroup) -> ClaimReport {
    timed(claim, group_id, || match checks::filter(claim, g) {
        Some(outcome) => outcome,
        None => checks::evaluate(claim, g, true),
    })
}

/// Runs the evaluation without the hypothesis filter. For the block-kernel
/// claim this also requires nontrivial kernels whether or not the group is md.
pub fn evaluate_unfiltered(claim: ClaimId, group_id: &str, g: &PermutationGroup) -> ClaimReport {
    timed(claim, group_id, || checks::evaluate(claim, g, false))
}

/// Re-checks a `fails` witness. `Ok(true)` means the failure reproduces.
///
/// For the direct-product claim `g` is the product group. Hunt witnesses name
/// a pair of groups and are re-checked with [`reverify_pair`].
pub fn reverify(claim: ClaimId, g: &PermutationGroup, witness: &str) -> Result<bool> {
    checks::reverify(claim, g, witness)
}

/// Parses `<g1, g2, ...>` as the subgroup of `g` those elements generate.
pub fn parse_subgroup(g: &PermutationGroup, text: &str) -> Result<Subgroup> {
    let inner = text
        .trim()
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected `<...>`, found `{text}`"),
        })?;
    let gens = inner
        .split(", ")
        .map(|s| Permutation::parse_cycles(s.trim(), g.degree()))
        .collect::<Result<Vec<_>>>()?;
    g.subgroup_generated(&gens)
}
