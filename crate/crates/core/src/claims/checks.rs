use super::{parse_subgroup, ClaimId, Outcome};
use crate::catalog::point_stabilizer_is_md;
use crate::error::{Error, Result};
use crate::group::{BlockSystem, PermutationGroup, Subgroup, SubgroupLattice};
use crate::perm::Permutation;

fn bad_witness(text: &str) -> Error {
    Error::Syntax {
        line: 1,
        column: 1,
        message: format!("unrecognized witness `{text}`"),
    }
}

/// Transitive, primitive, non-abelian and of odd order.
fn odd_primitive_filter(g: &PermutationGroup) -> Option<String> {
    if !g.is_transitive() {
        Some("not transitive".into())
    } else if !g.is_primitive() {
        Some("imprimitive".into())
    } else if g.is_abelian() {
        Some("abelian".into())
    } else if g.order().is_multiple_of(2) {
        Some(format!("even order {}", g.order()))
    } else {
        None
    }
}

/// The hypothesis filter; `Some` is the outcome that replaces evaluation.
pub(super) fn filter(claim: ClaimId, g: &PermutationGroup) -> Option<Outcome> {
    let reason = match claim {
        ClaimId::BlockKernel => {
            if !g.is_transitive() {
                Some("not transitive".into())
            } else if g.is_primitive() {
                Some("primitive: no nontrivial block system".into())
            } else {
                None
            }
        }
        ClaimId::OddPrimitive
        | ClaimId::FixAtMostOne
        | ClaimId::StabSemiregular
        | ClaimId::RegularSubgroup
        | ClaimId::Ld => odd_primitive_filter(g),
        ClaimId::Div4 => {
            if g.is_abelian() {
                Some("abelian".into())
            } else {
                match g.is_simple() {
                    Err(e) => return Some(Outcome::undecided(format!("simplicity scan: {e}"))),
                    Ok(false) => Some("not simple: some element has a proper normal closure".into()),
                    Ok(true) => None,
                }
            }
        }
        ClaimId::RegularElement => {
            if !g.is_transitive() {
                Some("not transitive".into())
            } else if g.degree() == 1 {
                Some("degree 1".into())
            } else {
                None
            }
        }
        ClaimId::Hunt => Some("decided over a population of groups".into()),
        ClaimId::DirectProduct => Some("decided on a product of two factor groups".into()),
    };
    reason.map(Outcome::not_applicable)
}

pub(super) fn evaluate(claim: ClaimId, g: &PermutationGroup, filtered: bool) -> Outcome {
    let result = match claim {
        ClaimId::BlockKernel => block_kernel(g, filtered),
        ClaimId::OddPrimitive => normal_subgroup(g),
        ClaimId::FixAtMostOne => fix_at_most_one(g),
        ClaimId::StabSemiregular => stab_semiregular(g),
        ClaimId::RegularSubgroup => regular_subgroup(g),
        ClaimId::Ld => ld(g),
        ClaimId::Div4 => Ok(div4(g)),
        ClaimId::RegularElement => regular_element(g),
        ClaimId::Hunt | ClaimId::DirectProduct => Ok(filter(claim, g).expect("always filtered")),
    };
    result.unwrap_or_else(|e| Outcome::undecided(e.to_string()))
}

fn normal_by_elements(g: &PermutationGroup, h: &Subgroup) -> bool {
    g.generators()
        .iter()
        .all(|s| h.elements().iter().all(|x| h.contains(&x.conjugate_by(s))))
}

fn parse_block_system(degree: usize, text: &str) -> Result<BlockSystem> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| bad_witness(text))?;
    let mut blocks = Vec::new();
    for piece in inner.split('}') {
        let piece = piece.trim_start_matches([',', ' ', '{']);
        if piece.is_empty() {
            continue;
        }
        let block = piece
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad_witness(text)))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(block);
    }
    BlockSystem::new(degree, blocks)
}

/// Why the kernel of `q` breaks the claim, if it does.
fn block_kernel_failure(g: &PermutationGroup, q: &BlockSystem, nontrivial: bool) -> Result<Option<&'static str>> {
    let k = g.block_kernel(q)?;
    if k != g.block_kernel_by_intersection(q)? {
        return Ok(Some("kernel by element filter differs from the intersection of block stabilizers"));
    }
    if !normal_by_elements(g, &k) {
        return Ok(Some("kernel is not normal"));
    }
    if nontrivial && k.is_trivial() {
        return Ok(Some("kernel is trivial"));
    }
    Ok(None)
}

fn block_kernel(g: &PermutationGroup, filtered: bool) -> Result<Outcome> {
    let systems = g.minimal_block_systems()?;
    let (nontrivial, note) = if filtered {
        match point_stabilizer_is_md(g) {
            Some(true) => (true, "md stabilizer: kernels must be nontrivial"),
            Some(false) => (false, "not md: only normality is checked"),
            None => (false, "lattice out of reach: nontriviality not checked"),
        }
    } else {
        (true, "unfiltered: kernels must be nontrivial")
    };
    if systems.is_empty() {
        return Ok(Outcome::holds("no nontrivial block system").note(note));
    }
    let mut kernels = Vec::new();
    for q in &systems {
        if let Some(why) = block_kernel_failure(g, q, nontrivial)? {
            return Ok(Outcome::fails(q.to_string(), why).note(note));
        }
        let k = g.block_kernel(q)?;
        kernels.push(format!("{q}: {k} order {}", k.order()));
    }
    let reason = format!(
        "{} minimal block system(s); kernels normal{}",
        systems.len(),
        if nontrivial { " and nontrivial" } else { "" }
    );
    Ok(Outcome::holds(reason).with_witness(kernels.join("; ")).note(note))
}

/// Fixed-point-free elements together with the identity, sorted.
fn fixed_point_free_with_identity(g: &PermutationGroup) -> Result<Vec<Permutation>> {
    Ok(g.elements()?
        .iter()
        .filter(|x| x.is_identity() || x.fixed_count() == 0)
        .cloned()
        .collect())
}

/// First pair of the sorted set whose product leaves it.
fn first_unclosed(set: &[Permutation]) -> Option<(&Permutation, &Permutation)> {
    set.iter().find_map(|a| {
        set.iter()
            .find(|b| set.binary_search(&a.compose_unchecked(b)).is_err())
            .map(|b| (a, b))
    })
}

fn is_prime(n: usize) -> bool {
    n > 1 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn normal_subgroup(g: &PermutationGroup) -> Result<Outcome> {
    if g.is_trivial() {
        return Ok(Outcome::fails("trivial", "the trivial group has no nontrivial subgroup"));
    }
    let n = g.degree();
    let candidate = fixed_point_free_with_identity(g)?;
    if first_unclosed(&candidate).is_none() && candidate.len() > 1 && (candidate.len() as u128) < g.order() {
        let h = Subgroup::from_sorted_elements(candidate, g.order());
        if h.order() == n && h.is_transitive() && g.is_normal(&h) {
            return Ok(Outcome::holds(format!(
                "fixed-point-free elements and the identity form a regular normal subgroup of order {n}"
            ))
            .with_witness(h.to_string()));
        }
    }
    for class in g.conjugacy_classes()? {
        let x = &class[0];
        if !is_prime(x.order()) {
            continue;
        }
        let closure = g.normal_closure(std::slice::from_ref(x))?;
        if (closure.order() as u128) < g.order() {
            return Ok(Outcome::holds(format!(
                "normal closure of <{x}> is proper of order {}",
                closure.order()
            ))
            .with_witness(closure.to_string())
            .note("fixed-point-free set is not a regular normal subgroup"));
        }
    }
    Ok(Outcome::fails(
        "simple",
        "every element of prime order has normal closure the whole group",
    ))
}

fn fix_at_most_one(g: &PermutationGroup) -> Result<Outcome> {
    let elements = g.elements()?;
    if let Some(x) = elements.iter().find(|x| !x.is_identity() && x.fixed_count() > 1) {
        return Ok(Outcome::fails(x.to_string(), format!("fixes {} points", x.fixed_count())));
    }
    Ok(Outcome::holds(format!(
        "all {} non-identity elements fix at most one point",
        elements.len() - 1
    )))
}

fn stab_semiregular(g: &PermutationGroup) -> Result<Outcome> {
    let n = g.degree();
    for v in 0..n {
        let stab = g.point_stabilizer(v)?;
        if stab.order() >= n {
            return Ok(Outcome::fails(
                format!("point {v}"),
                format!("|Stab({v})| = {} is not below {n}", stab.order()),
            ));
        }
        if let Some(x) = stab.elements().iter().find(|x| !x.is_identity() && x.fixed_count() > 1) {
            return Ok(Outcome::fails(
                x.to_string(),
                format!("stabilizer of {v} fixes a second point"),
            ));
        }
    }
    let stab = g.point_stabilizer(0)?;
    let sizes: Vec<String> = g.suborbits(0)?.iter().map(|o| o.len().to_string()).collect();
    Ok(Outcome::holds(format!(
        "|Stab(v)| = {} < {n} and each stabilizer is semiregular off its point",
        stab.order()
    ))
    .with_witness(stab.to_string())
    .note(format!("suborbit sizes at 0: {}", sizes.join(" "))))
}

fn regular_subgroup(g: &PermutationGroup) -> Result<Outcome> {
    let n = g.degree();
    let candidate = fixed_point_free_with_identity(g)?;
    let count = candidate.len() - 1;
    if count != n - 1 {
        return Ok(Outcome::fails(
            format!("count {count}"),
            format!("{count} fixed-point-free elements, expected {}", n - 1),
        ));
    }
    if let Some(x) = candidate.iter().find(|x| !x.is_identity() && !x.is_regular_element()) {
        return Ok(Outcome::fails(
            x.to_string(),
            format!("fixed-point-free element of cycle type {}", x.cycle_type()),
        ));
    }
    if let Some((a, b)) = first_unclosed(&candidate) {
        return Ok(Outcome::fails(format!("{a} * {b}"), "product leaves the set"));
    }
    let h = Subgroup::from_sorted_elements(candidate, g.order());
    if !h.is_transitive() {
        return Ok(Outcome::fails("not transitive", "the subgroup is not transitive"));
    }
    let stab = g.order() / n as u128;
    if h.order() as u128 <= stab {
        return Ok(Outcome::fails(
            format!("order {} <= {stab}", h.order()),
            "the subgroup is not larger than a point stabilizer",
        ));
    }
    for s in g.generators() {
        if let Some(x) = h.elements().iter().find(|x| !h.contains(&x.conjugate_by(s))) {
            return Ok(Outcome::fails(format!("{x} ^ {s}"), "the subgroup is not normal"));
        }
    }
    Ok(Outcome::holds(format!(
        "{count} fixed-point-free elements, all of uniform cycle type, form a normal regular subgroup of order {n} > |Stab| = {stab}"
    ))
    .with_witness(h.to_string()))
}

pub(super) fn collection_text(lattice: &SubgroupLattice, members: &[usize]) -> String {
    let parts: Vec<String> = members.iter().map(|&i| lattice.subgroup(i).to_string()).collect();
    parts.join(" + ")
}

fn ld(g: &PermutationGroup) -> Result<Outcome> {
    let n = g.degree();
    let lattice = g.subgroup_lattice()?;
    let fd = lattice.minimal_faithful_degree();
    let witness = collection_text(&lattice, &fd.collection);
    let mut out = if fd.degree == n {
        Outcome::holds(format!("minimal faithful degree {n} equals the degree")).with_witness(witness)
    } else {
        Outcome::fails(
            witness,
            format!("minimal faithful degree {} differs from the degree {n}", fd.degree),
        )
    };
    if let Some((t, _)) = fd.transitive {
        out = out.note(format!("best transitive degree {t}"));
    }
    if let Some((d, _)) = &fd.intransitive {
        out = out.note(format!("best intransitive degree {d}"));
    }
    Ok(out)
}

fn div4(g: &PermutationGroup) -> Outcome {
    let order = g.order();
    if order.is_multiple_of(4) {
        Outcome::holds(format!("order {order} is divisible by 4"))
    } else {
        Outcome::fails(format!("order={order}"), format!("order {order} is not divisible by 4"))
    }
}

fn regular_element(g: &PermutationGroup) -> Result<Outcome> {
    let found = g
        .elements()?
        .iter()
        .find(|x| !x.is_identity() && x.is_regular_element());
    let scope = "empirical probe over this group's elements only";
    Ok(match found {
        Some(x) => Outcome::holds(format!("uniform cycle type {}", x.cycle_type()))
            .with_witness(x.to_string())
            .note(scope),
        None => Outcome::fails("none", "no non-identity element has uniform cycle type").note(scope),
    })
}

fn parse_element(g: &PermutationGroup, text: &str) -> Result<Permutation> {
    let x = Permutation::parse_cycles(text.trim(), g.degree())?;
    if !g.contains(&x) {
        return Err(Error::NotSubgroup(format!("{x} is not a group element")));
    }
    Ok(x)
}

/// `Σ |G : Aᵢ| < n` with trivially intersecting cores.
fn smaller_faithful_collection(g: &PermutationGroup, text: &str) -> Result<bool> {
    let mut total: u128 = 0;
    let mut meet: Option<Subgroup> = None;
    for part in text.split(" + ") {
        let a = parse_subgroup(g, part)?;
        total += a.index();
        let core = g.core_of(&a)?;
        meet = Some(match meet {
            None => core,
            Some(m) => m.intersection(&core),
        });
    }
    Ok(meet.is_some_and(|m| m.is_trivial()) && total < g.degree() as u128)
}

pub(super) fn reverify(claim: ClaimId, g: &PermutationGroup, witness: &str) -> Result<bool> {
    let n = g.degree();
    match claim {
        ClaimId::BlockKernel => {
            let q = parse_block_system(n, witness)?;
            Ok(block_kernel_failure(g, &q, true)?.is_some())
        }
        ClaimId::OddPrimitive => match witness {
            "simple" => g.is_simple(),
            "trivial" => Ok(g.is_trivial()),
            _ => Err(bad_witness(witness)),
        },
        ClaimId::FixAtMostOne => {
            let x = parse_element(g, witness)?;
            Ok(!x.is_identity() && x.fixed_count() > 1)
        }
        ClaimId::StabSemiregular => {
            if let Some(v) = witness.strip_prefix("point ") {
                let v: usize = v.parse().map_err(|_| bad_witness(witness))?;
                return Ok(g.point_stabilizer(v)?.order() >= n);
            }
            let x = parse_element(g, witness)?;
            Ok(!x.is_identity() && x.fixed_count() > 1)
        }
        ClaimId::RegularSubgroup => {
            let candidate = fixed_point_free_with_identity(g)?;
            let in_candidate = |x: &Permutation| candidate.binary_search(x).is_ok();
            if let Some(k) = witness.strip_prefix("count ") {
                let k: usize = k.parse().map_err(|_| bad_witness(witness))?;
                return Ok(k == candidate.len() - 1 && k != n - 1);
            }
            if let Some(rest) = witness.strip_prefix("order ") {
                let (h, s) = rest.split_once(" <= ").ok_or_else(|| bad_witness(witness))?;
                let (h, s): (u128, u128) = (
                    h.parse().map_err(|_| bad_witness(witness))?,
                    s.parse().map_err(|_| bad_witness(witness))?,
                );
                return Ok(h == candidate.len() as u128 && s == g.order() / n as u128 && h <= s);
            }
            if witness == "not transitive" {
                let h = Subgroup::from_sorted_elements(candidate, g.order());
                return Ok(!h.is_transitive());
            }
            if let Some((a, b)) = witness.split_once(" * ") {
                let (a, b) = (parse_element(g, a)?, parse_element(g, b)?);
                return Ok(in_candidate(&a) && in_candidate(&b) && !in_candidate(&(&a * &b)));
            }
            if let Some((x, s)) = witness.split_once(" ^ ") {
                let (x, s) = (parse_element(g, x)?, parse_element(g, s)?);
                return Ok(in_candidate(&x) && !in_candidate(&x.conjugate_by(&s)));
            }
            let x = parse_element(g, witness)?;
            Ok(!x.is_identity() && x.fixed_count() == 0 && !x.is_regular_element())
        }
        ClaimId::Ld => smaller_faithful_collection(g, witness),
        ClaimId::Div4 => {
            let order: u128 = witness
                .strip_prefix("order=")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| bad_witness(witness))?;
            Ok(order == g.order() && !order.is_multiple_of(4))
        }
        ClaimId::RegularElement => match witness {
            "none" => Ok(!g.elements()?.iter().any(|x| !x.is_identity() && x.is_regular_element())),
            _ => Err(bad_witness(witness)),
        },
        ClaimId::DirectProduct => super::hunt::reverify_direct_product(g, witness),
        ClaimId::Hunt => Err(Error::NotSubgroup(
            "hunt witnesses name a pair of groups; use reverify_pair".into(),
        )),
    }
}
