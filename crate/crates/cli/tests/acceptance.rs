//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances and seeds are pinned below.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use korbit::catalog::{enumerate_transitive, point_stabilizer_is_md, Catalog};
use korbit::claims::{check, hunt_hypothesis, ClaimId, Verdict};
use korbit::group::closure;
use korbit::norbit::{n_orbit, n_orbits_isomorphic};
use korbit::{Caps, Permutation, PermutationGroup, Subgroup};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FROBENIUS_LIMIT: Duration = Duration::from_secs(1);
const ISO_LIMIT: Duration = Duration::from_secs(5);
const FAITHFUL_LIMIT: Duration = Duration::from_secs(10);
const CLOSURE_ORDER_LIMIT: u128 = 5000;
const ISO_GROUPS: [&str; 5] = ["F21", "PSL27", "S4", "D8", "Q8"];
const ISO_SEEDS: [u64; 5] = [0x0a11_0001, 0x0a11_0002, 0x0a11_0003, 0x0a11_0004, 0x0a11_0005];
const CONJUGATIONS_PER_GROUP: usize = 20;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn builtin() -> Catalog {
    Catalog::builtin(Caps::default()).expect("builtin catalog loads")
}

fn group<'a>(cat: &'a Catalog, id: &str) -> &'a PermutationGroup {
    cat.get(id).unwrap_or_else(|| panic!("missing {id}")).group()
}

fn frobenius_suite(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let claims = [
        ClaimId::FixAtMostOne,
        ClaimId::StabSemiregular,
        ClaimId::RegularSubgroup,
        ClaimId::OddPrimitive,
    ];
    for (id, order, degree) in [("F21", 21, 7), ("F55", 55, 11), ("F39", 39, 13)] {
        let g = group(cat, id);
        ensure(g.order() == order && g.degree() == degree, format!("{id} has order {}", g.order()))?;
        for claim in claims {
            let r = check(claim, id, g);
            ensure(r.verdict == Verdict::Holds, format!("{claim} on {id}: {} ({})", r.verdict, r.reason))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < FROBENIUS_LIMIT, format!("took {elapsed:.2?}"))?;
    Ok(format!("12 checks hold in {elapsed:.2?} (limit {FROBENIUS_LIMIT:?})"))
}

fn block_kernel_suite(cat: &Catalog) -> Outcome {
    let mut systems = 0;
    let mut md_entries = 0;
    for e in cat.entries() {
        let g = e.group();
        if !g.is_transitive() || g.is_primitive() {
            continue;
        }
        let md = point_stabilizer_is_md(g) == Some(true);
        md_entries += usize::from(md);
        for q in g.minimal_block_systems().map_err(|e| e.to_string())? {
            systems += 1;
            let k = g.block_kernel(&q).map_err(|e| e.to_string())?;
            let normal = g.elements().unwrap().iter().all(|s| {
                k.elements().iter().all(|x| k.contains(&x.conjugate_by(s)))
            });
            ensure(normal, format!("{}: kernel of {q} not normal", e.id()))?;
            ensure(!md || !k.is_trivial(), format!("{}: md but kernel of {q} trivial", e.id()))?;
        }
        let r = check(ClaimId::BlockKernel, e.id(), g);
        ensure(r.verdict == Verdict::Holds, format!("{}: {}", e.id(), r.reason))?;
    }
    Ok(format!("{systems} minimal systems, {md_entries} imprimitive md entries"))
}

fn coset_core_identity() -> Outcome {
    let p = |s: &str| Permutation::parse_cycles(s, 4).unwrap();
    let s4 = PermutationGroup::generate(vec![p("(0 1)"), p("(0 1 2 3)")], 4).unwrap();
    let d4 = s4.subgroup_generated(&[p("(0 1 2 3)"), p("(0 2)")]).unwrap();
    let action = s4.coset_action(&d4).map_err(|e| e.to_string())?;
    let core = s4.core_of(&d4).map_err(|e| e.to_string())?;
    let mut klein = vec![p("()"), p("(0 1)(2 3)"), p("(0 2)(1 3)"), p("(0 3)(1 2)")];
    klein.sort();
    ensure(action.kernel().elements() == klein.as_slice(), "kernel is not the Klein group")?;
    ensure(core.elements() == klein.as_slice(), "core is not the Klein group")?;
    ensure(action.image().order() == 6, format!("image order {}", action.image().order()))?;
    Ok("kernel = core = V4, image order 6".into())
}

fn n_orbit_identities(cat: &Catalog) -> Outcome {
    for e in cat.entries() {
        let g = e.group();
        let x = n_orbit(g).map_err(|e| e.to_string())?;
        ensure(x.row_count() as u128 == g.order(), format!("{}: row count", e.id()))?;
        let aut = x.automorphism_group().map_err(|e| e.to_string())?;
        ensure(aut.elements().unwrap() == g.elements().unwrap(), format!("{}: Aut(X) differs", e.id()))?;
        for v in 0..g.degree() {
            let column: Vec<usize> = x.k_projection(&[v]).unwrap().tuples().iter().map(|t| t[0]).collect();
            ensure(column == g.orbit(v), format!("{}: column {v}", e.id()))?;
        }
    }
    Ok(format!("{} groups", cat.len()))
}

fn oracle_equivalence(cat: &Catalog) -> Outcome {
    let mut compared = 0;
    for e in cat.entries() {
        let g = e.group();
        if g.order() <= CLOSURE_ORDER_LIMIT {
            let brute = closure(g.degree(), g.generators(), CLOSURE_ORDER_LIMIT as usize).map_err(|e| e.to_string())?;
            ensure(brute.len() as u128 == g.order(), format!("{}: closure {} vs chain {}", e.id(), brute.len(), g.order()))?;
            compared += 1;
        }
        for v in 0..g.degree() {
            let stab = g.point_stabilizer(v).map_err(|e| e.to_string())?;
            ensure(
                g.orbit(v).len() as u128 * stab.order() as u128 == g.order(),
                format!("{}: orbit-stabilizer at {v}", e.id()),
            )?;
        }
    }
    Ok(format!("{compared} closures compared, orbit-stabilizer at every point"))
}

fn div4(cat: &Catalog) -> Outcome {
    for id in ["A5", "PSL27"] {
        let g = group(cat, id);
        ensure(g.is_simple().map_err(|e| e.to_string())?, format!("{id} not simple"))?;
        ensure(g.order().is_multiple_of(4), format!("{id} order {}", g.order()))?;
        let r = check(ClaimId::Div4, id, g);
        ensure(r.verdict == Verdict::Holds, format!("{id}: {}", r.reason))?;
    }
    Ok("A5 (60) and PSL27 (168)".into())
}

fn isomorphism_backtrack(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    for (id, seed) in ISO_GROUPS.iter().zip(ISO_SEEDS) {
        let g = group(cat, id);
        let x = n_orbit(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..CONJUGATIONS_PER_GROUP {
            let mut images: Vec<usize> = (0..g.degree()).collect();
            images.shuffle(&mut rng);
            let s = Permutation::from_images(images).unwrap();
            let gens = g.generators().iter().map(|a| a.conjugate_by(&s)).collect();
            let h = PermutationGroup::generate(gens, g.degree()).unwrap();
            let y = n_orbit(&h).unwrap();
            let verdict = n_orbits_isomorphic(&x, &y);
            let w = verdict.witness().ok_or(format!("{id} conjugate {k}: {verdict:?}"))?;
            let maps = x.rows().iter().all(|r| y.contains_row(&r.conjugate_by(w)));
            ensure(maps, format!("{id} conjugate {k}: witness {w} does not map X onto Y"))?;
        }
    }
    let c4 = n_orbit(group(cat, "C4")).unwrap();
    let v4 = n_orbit(group(cat, "C2xC2")).unwrap();
    ensure(!n_orbits_isomorphic(&c4, &v4).is_isomorphic(), "C4 and C2xC2 reported isomorphic")?;
    let elapsed = start.elapsed();
    ensure(elapsed < ISO_LIMIT, format!("took {elapsed:.2?}"))?;
    Ok(format!(
        "{} conjugations verified, C4 vs C2xC2 distinct, {elapsed:.2?} (limit {ISO_LIMIT:?})",
        ISO_GROUPS.len() * CONJUGATIONS_PER_GROUP
    ))
}

fn stored_oracle() -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../oracles/transitive_counts.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("oracle run stored")).unwrap()
}

fn hunt_small_degrees() -> Outcome {
    let oracle = stored_oracle();
    let mut population = Catalog::new();
    let mut counts = Vec::new();
    for d in 1..=4 {
        let specs = enumerate_transitive(d).map_err(|e| e.to_string())?;
        let expected = oracle[d.to_string()]["classes"].as_u64().unwrap() as usize;
        ensure(specs.len() == expected, format!("degree {d}: {} vs oracle {expected}", specs.len()))?;
        counts.push(specs.len());
        let xs: Vec<_> = specs.iter().map(|s| n_orbit(&s.build(Caps::default()).unwrap()).unwrap()).collect();
        for (i, a) in xs.iter().enumerate() {
            for b in &xs[i + 1..] {
                ensure(!n_orbits_isomorphic(a, b).is_isomorphic(), format!("degree {d}: conjugate results"))?;
            }
        }
        population.extend(specs, Caps::default()).map_err(|e| e.to_string())?;
    }
    let reports = hunt_hypothesis(population.entries(), 4);
    let fails = reports.iter().filter(|r| r.verdict == Verdict::Fails).count();
    ensure(fails == 0, format!("{fails} hunt failures"))?;
    Ok(format!("counts {counts:?} match the oracle run; {} buckets, 0 fails", reports.len()))
}

/// Exhaustive search over all sets of conjugacy-class representatives.
fn antichain_oracle(g: &PermutationGroup) -> (usize, Option<usize>) {
    let lattice = g.subgroup_lattice().unwrap();
    let reps = lattice.class_representatives();
    let cores: Vec<Subgroup> = reps.iter().map(|&i| lattice.subgroup(lattice.core_index(i))).collect();
    let mut best = usize::MAX;
    let mut best_intransitive: Option<usize> = None;
    for mask in 1u64..(1 << reps.len()) {
        let members: Vec<usize> = (0..reps.len()).filter(|k| mask >> k & 1 == 1).collect();
        let meet = members.iter().skip(1).fold(cores[members[0]].clone(), |m, &k| m.intersection(&cores[k]));
        if !meet.is_trivial() {
            continue;
        }
        let cost: usize = members.iter().map(|&k| lattice.index(reps[k])).sum();
        best = best.min(cost);
        if members.len() >= 2 {
            best_intransitive = Some(best_intransitive.map_or(cost, |b: usize| b.min(cost)));
        }
    }
    (best, best_intransitive)
}

fn minimal_faithful_degrees(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let mut seen = BTreeSet::new();
    for (id, expected) in [("C2xC2", 4), ("S4", 4), ("Q8", 8), ("F21", 7)] {
        let g = group(cat, id);
        let fd = g.subgroup_lattice().map_err(|e| e.to_string())?.minimal_faithful_degree();
        let (oracle, oracle_intransitive) = antichain_oracle(g);
        ensure(fd.degree == oracle, format!("{id}: search {} vs oracle {oracle}", fd.degree))?;
        ensure(fd.degree == expected, format!("{id}: {} expected {expected}", fd.degree))?;
        if id == "C2xC2" {
            let intransitive = fd.intransitive.as_ref().map(|t| t.0);
            ensure(intransitive == Some(4), format!("C2xC2 intransitive optimum {intransitive:?}"))?;
            ensure(oracle_intransitive == Some(4), "oracle finds no intransitive optimum")?;
        }
        seen.insert(format!("{id}={}", fd.degree));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < FAITHFUL_LIMIT, format!("took {elapsed:.2?}"))?;
    Ok(format!("{} in {elapsed:.2?} (limit {FAITHFUL_LIMIT:?})", seen.into_iter().collect::<Vec<_>>().join(" ")))
}

fn deterministic_output() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_korbit"))
            .args(["check", "all", "--json", "--jobs", "4"])
            .env_remove("KORBIT_CATALOG")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    ensure(a.status.code() == Some(0), format!("exit status {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty(), "empty output")?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{lines} JSON lines, byte-identical across runs"))
}

fn main() {
    let cat = builtin();
    let results: Vec<(&str, Outcome)> = vec![
        ("frobenius suite", frobenius_suite(&cat)),
        ("block kernels are normal", block_kernel_suite(&cat)),
        ("coset kernel equals core", coset_core_identity()),
        ("n-orbit identities", n_orbit_identities(&cat)),
        ("chain order against closure", oracle_equivalence(&cat)),
        ("simple groups divisible by 4", div4(&cat)),
        ("isomorphism backtrack", isomorphism_backtrack(&cat)),
        ("transitive enumeration and hunt", hunt_small_degrees()),
        ("minimal faithful degree", minimal_faithful_degrees(&cat)),
        ("deterministic check output", deterministic_output()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
