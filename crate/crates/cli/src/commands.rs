use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use korbit::catalog::{enumerate_transitive, print_spec, Catalog, CatalogEntry, MAX_ENUMERATION_DEGREE};
use korbit::claims::{
    check, check_direct_product, direct_product_pairs, evaluate_bucket, hunt_buckets, ClaimId, ClaimReport,
    HuntBucket, Verdict,
};
use korbit::norbit::n_orbit;
use korbit::group::AutomorphicMode;
use korbit::{Error, PermutationGroup};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{CatalogCommand, Cli, Command, RunConfig};

type Out = Vec<u8>;

pub fn run(cli: &Cli, out: &mut Out) -> Result<u8, String> {
    let config = &cli.config;
    match &cli.command {
        Command::Info { id } => info(config, id, out),
        Command::Norbit { id, project } => norbit(config, id, project.as_deref(), out),
        Command::Check { claim } => check_cmd(config, claim, out),
        Command::Hunt {
            degree_max,
            no_enumerate,
        } => hunt(config, *degree_max, *no_enumerate, out),
        Command::Catalog(CatalogCommand::List) => catalog_list(config, out),
        Command::Catalog(CatalogCommand::Enumerate { degree }) => catalog_enumerate(config, *degree, out),
    }
}

fn load_catalog(config: &RunConfig) -> Result<Catalog, String> {
    let caps = config.caps();
    let mut catalog = if config.no_builtin {
        Catalog::new()
    } else {
        Catalog::builtin(caps).map_err(|e| e.to_string())?
    };
    let mut paths = config.catalogs.clone();
    if paths.is_empty() {
        if let Some(p) = std::env::var_os("KORBIT_CATALOG").filter(|p| !p.is_empty()) {
            paths.push(p.into());
        }
    }
    for path in paths {
        catalog.load_file(&path, caps).map_err(|e| e.to_string())?;
    }
    Ok(catalog)
}

fn pool(config: &RunConfig) -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs as usize);
    }
    builder.build().map_err(|e| e.to_string())
}

fn entry<'a>(catalog: &'a Catalog, id: &str) -> Result<&'a CatalogEntry, String> {
    catalog
        .get(id)
        .ok_or_else(|| Error::UnknownGroup(id.to_string()).to_string())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn point_set(points: &[usize]) -> String {
    let inner: Vec<String> = points.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn info(config: &RunConfig, id: &str, out: &mut Out) -> Result<u8, String> {
    let catalog = load_catalog(config)?;
    let e = entry(&catalog, id)?;
    let g = e.group();
    let transitive = g.is_transitive();
    let orbits: Vec<String> = g.orbits().iter().map(|o| point_set(o)).collect();
    let systems: Vec<String> = if transitive {
        g.minimal_block_systems()
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        Vec::new()
    };
    let suborbits: Option<Vec<usize>> = transitive.then(|| {
        g.suborbits(0)
            .map(|s| s.iter().map(Vec::len).collect())
            .unwrap_or_default()
    });
    let automorphic = g.automorphic_numbers().ok();
    let lattice = g.subgroup_lattice();
    let (md, faithful, lattice_note) = match &lattice {
        Ok(l) => {
            let md: Vec<Value> = l
                .md_stabilizer_indices()
                .into_iter()
                .map(|i| {
                    json!({
                        "order": l.order(i),
                        "index": l.index(i),
                        "class_size": l.classes()[l.class_of(i)].len(),
                        "subgroup": l.subgroup(i).to_string(),
                    })
                })
                .collect();
            let fd = l.minimal_faithful_degree();
            let faithful = json!({
                "degree": fd.degree,
                "transitive": fd.transitive.map(|t| t.0),
                "intransitive": fd.intransitive.as_ref().map(|t| t.0),
            });
            (Some(md), Some(faithful), None)
        }
        Err(err) => (None, None, Some(err.to_string())),
    };
    let tag_checks: Vec<Value> = e
        .tag_checks()
        .into_iter()
        .map(|t| json!({"tag": t.tag, "computed": t.computed}))
        .collect();
    let stabilizer_md = korbit::catalog::point_stabilizer_is_md(g);

    if config.json {
        let v = json!({
            "id": e.id(),
            "source": e.spec().source.to_string(),
            "degree": g.degree(),
            "order": g.order(),
            "generators": g.generators().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "orbits": orbits,
            "transitive": transitive,
            "primitive": g.is_primitive(),
            "primitive_non_abelian": g.is_primitive_non_abelian(),
            "abelian": g.is_abelian(),
            "minimal_block_systems": systems,
            "suborbit_sizes": suborbits,
            "automorphic_numbers": automorphic,
            "md_stabilizer_classes": md,
            "stabilizer_is_md": stabilizer_md,
            "minimal_faithful_degree": faithful,
            "lattice_unavailable": lattice_note,
            "tags": tag_checks,
        });
        writeln!(out, "{v}").map_err(|e| e.to_string())?;
        return Ok(0);
    }

    let mut s = String::new();
    let _ = writeln!(s, "group       {}", e.id());
    let _ = writeln!(s, "source      {}", e.spec().source);
    let _ = writeln!(s, "degree      {}", g.degree());
    let _ = writeln!(s, "order       {}", g.order());
    let gens: Vec<String> = g.generators().iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "generators  {}", gens.join(", "));
    let _ = writeln!(s, "orbits      {}", orbits.join(" "));
    let _ = writeln!(s, "transitive  {}", yes(transitive));
    let _ = writeln!(s, "primitive   {} (non-abelian primitive: {})", yes(g.is_primitive()), yes(g.is_primitive_non_abelian()));
    if transitive {
        if systems.is_empty() {
            let _ = writeln!(s, "blocks      no nontrivial block system");
        } else {
            let _ = writeln!(s, "blocks      {} minimal system(s)", systems.len());
            for q in &systems {
                let _ = writeln!(s, "            {q}");
            }
        }
    }
    if let Some(sizes) = &suborbits {
        let sizes: Vec<String> = sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "suborbits   {}", sizes.join(" "));
    }
    if let Some(a) = &automorphic {
        let values: Vec<String> = a.values.iter().map(usize::to_string).collect();
        let mode = match a.mode {
            AutomorphicMode::SubgroupOrbits => "orbits of all subgroups",
            AutomorphicMode::Suborbits => "suborbits only",
        };
        let _ = writeln!(s, "automorphic {} ({mode})", values.join(" "));
    }
    match (&md, &faithful) {
        (Some(md), Some(f)) => {
            let _ = writeln!(s, "md classes  {}", md.len());
            for m in md {
                let _ = writeln!(
                    s,
                    "            order {} index {} class size {} {}",
                    m["order"], m["index"], m["class_size"],
                    m["subgroup"].as_str().unwrap_or_default()
                );
            }
            if let Some(b) = stabilizer_md {
                let _ = writeln!(s, "stab(0) md  {}", yes(b));
            }
            let _ = writeln!(s, "faithful    minimal degree {}", f["degree"]);
            let best = |v: &Value| if v.is_null() { "none".to_string() } else { v.to_string() };
            let _ = writeln!(
                s,
                "            best transitive {}, best intransitive {}",
                best(&f["transitive"]),
                best(&f["intransitive"])
            );
        }
        _ => {
            let _ = writeln!(s, "lattice     unavailable: {}", lattice_note.unwrap_or_default());
        }
    }
    for t in e.tag_checks() {
        let state = match t.computed {
            Some(true) => "confirmed",
            Some(false) => "DISCREPANCY: computation disagrees",
            None => "not recomputed",
        };
        let _ = writeln!(s, "tag         {} {state}", t.tag);
    }
    out.extend_from_slice(s.as_bytes());
    Ok(0)
}

fn norbit(config: &RunConfig, id: &str, project: Option<&[usize]>, out: &mut Out) -> Result<u8, String> {
    let catalog = load_catalog(config)?;
    let e = entry(&catalog, id)?;
    let g = e.group();
    let x = n_orbit(g).map_err(|e| e.to_string())?;
    let text = match project {
        Some(columns) => {
            let k = x.k_projection(columns).map_err(|e| e.to_string())?;
            if config.json {
                k.to_json(e.id(), g.degree(), g.order()).to_string() + "\n"
            } else {
                k.to_text()
            }
        }
        None if config.json => x.to_json(e.id(), g.order()).to_string() + "\n",
        None => x.to_text(),
    };
    out.extend_from_slice(text.as_bytes());
    Ok(0)
}

enum Unit<'a> {
    Single(ClaimId, &'a CatalogEntry),
    Pair(&'a CatalogEntry, &'a CatalogEntry),
    Bucket(HuntBucket<'a>),
}

fn run_unit(unit: &Unit<'_>, nodes: u64) -> ClaimReport {
    match unit {
        Unit::Single(claim, e) => check(*claim, e.id(), e.group()),
        Unit::Pair(a, b) => check_direct_product(a.id(), a.group(), b.id(), b.group()),
        Unit::Bucket(bucket) => evaluate_bucket(bucket, nodes),
    }
}

fn run_units(config: &RunConfig, units: &[Unit<'_>]) -> Result<Vec<ClaimReport>, String> {
    let nodes = config.caps().nodes;
    let pool = pool(config)?;
    Ok(pool.install(|| units.par_iter().map(|u| run_unit(u, nodes)).collect()))
}

fn write_reports(config: &RunConfig, reports: &[ClaimReport], started: Instant, out: &mut Out) -> Result<u8, String> {
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let fails = count(Verdict::Fails);
    let summary = format!(
        "{} report(s): {} holds, {fails} fails, {} not-applicable, {} undecided",
        reports.len(),
        count(Verdict::Holds),
        count(Verdict::NotApplicable),
        count(Verdict::Undecided),
    );
    if config.json {
        for r in reports {
            writeln!(out, "{}", r.to_json_line()).map_err(|e| e.to_string())?;
        }
        eprintln!("{summary} in {:.2?}", started.elapsed());
    } else {
        let mut s = String::new();
        for r in reports {
            let _ = writeln!(
                s,
                "{:<20} {:<14} {:<15} {:>9.2}ms  {}",
                r.claim_id.as_str(),
                r.group_id,
                r.verdict.to_string(),
                r.elapsed.as_secs_f64() * 1e3,
                r.reason
            );
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "{:<20} witness {w}", "");
            }
            for n in &r.notes {
                let _ = writeln!(s, "{:<20} note    {n}", "");
            }
        }
        let _ = writeln!(s, "{summary} in {:.2?}", started.elapsed());
        out.extend_from_slice(s.as_bytes());
    }
    Ok(u8::from(fails > 0))
}

fn check_cmd(config: &RunConfig, claim: &str, out: &mut Out) -> Result<u8, String> {
    let selected: Vec<ClaimId> = match claim {
        "all" => ClaimId::ALL.to_vec(),
        other => vec![other.parse::<ClaimId>()?],
    };
    let started = Instant::now();
    let catalog = load_catalog(config)?;
    let entries = catalog.entries();
    let mut units = Vec::new();
    for e in entries {
        for &claim in ClaimId::PER_GROUP.iter().filter(|c| selected.contains(c)) {
            units.push(Unit::Single(claim, e));
        }
    }
    if selected.contains(&ClaimId::DirectProduct) {
        units.extend(direct_product_pairs(entries).into_iter().map(|(a, b)| Unit::Pair(a, b)));
    }
    if selected.contains(&ClaimId::Hunt) {
        units.extend(hunt_buckets(entries, usize::MAX).into_iter().map(Unit::Bucket));
    }
    let reports = run_units(config, &units)?;
    write_reports(config, &reports, started, out)
}

fn hunt(config: &RunConfig, degree_max: usize, no_enumerate: bool, out: &mut Out) -> Result<u8, String> {
    let started = Instant::now();
    let mut catalog = load_catalog(config)?;
    if !no_enumerate {
        for d in 1..=degree_max.min(MAX_ENUMERATION_DEGREE) {
            let specs = enumerate_transitive(d).map_err(|e| e.to_string())?;
            catalog.extend(specs, config.caps()).map_err(|e| e.to_string())?;
        }
    }
    let units: Vec<Unit<'_>> = hunt_buckets(catalog.entries(), degree_max)
        .into_iter()
        .map(Unit::Bucket)
        .collect();
    let reports = run_units(config, &units)?;
    let code = write_reports(config, &reports, started, out)?;
    if !config.json {
        let undecided: Vec<&str> = reports
            .iter()
            .filter(|r| r.verdict == Verdict::Undecided)
            .map(|r| r.group_id.as_str())
            .collect();
        let line = if undecided.is_empty() {
            "undecided buckets: none\n".to_string()
        } else {
            format!("undecided buckets: {}\n", undecided.join("; "))
        };
        out.extend_from_slice(line.as_bytes());
    }
    Ok(code)
}

fn spec_json(e: &CatalogEntry) -> Value {
    json!({
        "id": e.id(),
        "degree": e.group().degree(),
        "order": e.group().order(),
        "source": e.spec().source.to_string(),
        "spec": print_spec(e.spec()),
        "discrepancies": e.discrepancies(),
    })
}

fn catalog_list(config: &RunConfig, out: &mut Out) -> Result<u8, String> {
    let catalog = load_catalog(config)?;
    let mut s = String::new();
    for e in catalog.entries() {
        if config.json {
            let _ = writeln!(s, "{}", spec_json(e));
        } else {
            let _ = writeln!(s, "{}", print_spec(e.spec()));
            let _ = writeln!(s, "#   order {}, {}", e.group().order(), e.spec().source);
            for d in e.discrepancies() {
                let _ = writeln!(s, "#   DISCREPANCY: declared {d} but computation disagrees");
            }
        }
    }
    out.extend_from_slice(s.as_bytes());
    Ok(0)
}

fn catalog_enumerate(config: &RunConfig, degree: usize, out: &mut Out) -> Result<u8, String> {
    let specs = enumerate_transitive(degree).map_err(|e| e.to_string())?;
    let mut s = String::new();
    for spec in specs {
        if config.json {
            let order = spec
                .build(config.caps())
                .as_ref()
                .map(PermutationGroup::order)
                .map_err(|e| e.to_string())?;
            let v = json!({"id": spec.id, "degree": spec.degree, "order": order, "spec": print_spec(&spec)});
            let _ = writeln!(s, "{v}");
        } else {
            let _ = writeln!(s, "{}", print_spec(&spec));
        }
    }
    out.extend_from_slice(s.as_bytes());
    Ok(0)
}
