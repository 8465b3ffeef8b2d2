//! Group specs: the line format, the seed catalog and transitive-group
//! enumeration for tiny degrees.
//!
//! A spec line reads
//!
//! ```text
//! group <id> deg <n> gens <cycles>[, <cycles>]* [tags <t1> <t2> ...]
//! ```
//!
//! with 0-based points and `()` for the identity. A tag `order=N` records the
//! expected order, which is checked when the spec is loaded.

mod enumerate;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;

pub use enumerate::{enumerate_transitive, MAX_ENUMERATION_DEGREE};

use crate::error::{Error, Result};
use crate::group::{Caps, PermutationGroup};
use crate::perm::Permutation;

const BUILTIN: &str = include_str!("builtin.grp");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Builtin,
    File(String),
    Enumerated,
    Inline,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Builtin => write!(f, "builtin"),
            Source::File(path) => write!(f, "file:{path}"),
            Source::Enumerated => write!(f, "enumerated"),
            Source::Inline => write!(f, "inline"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub id: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub tags: BTreeSet<String>,
    pub source: Source,
}

impl GroupSpec {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// The value of an `order=N` tag.
    pub fn recorded_order(&self) -> Option<u128> {
        self.tags
            .iter()
            .find_map(|t| t.strip_prefix("order=")?.parse().ok())
    }

    pub fn build(&self, caps: Caps) -> Result<PermutationGroup> {
        PermutationGroup::generate_with_caps(self.generators.clone(), self.degree, caps)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_spec(self))
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated words of a line with their 1-based char columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in text.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push((c + 1, &text[b..byte]));
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push((c + 1, &text[b..]));
    }
    out
}

fn parse_line(text: &str, line: usize, source: &Source) -> Result<GroupSpec> {
    let w = words(text);
    let end_col = text.chars().count() + 1;
    let expect = |i: usize, keyword: &str| -> Result<()> {
        match w.get(i) {
            Some((_, word)) if *word == keyword => Ok(()),
            Some((col, word)) => Err(syntax(line, *col, format!("expected `{keyword}`, found `{word}`"))),
            None => Err(syntax(line, end_col, format!("expected `{keyword}`"))),
        }
    };
    expect(0, "group")?;
    let id = match w.get(1) {
        Some((col, id)) if id.contains(['(', ')', ',', '#']) => {
            return Err(syntax(line, *col, format!("invalid group id `{id}`")))
        }
        Some((_, id)) => id.to_string(),
        None => return Err(syntax(line, end_col, "expected a group id")),
    };
    expect(2, "deg")?;
    let degree = match w.get(3) {
        Some((col, n)) => match n.parse::<usize>() {
            Ok(0) | Err(_) => return Err(syntax(line, *col, format!("invalid degree `{n}`"))),
            Ok(d) => d,
        },
        None => return Err(syntax(line, end_col, "expected a degree")),
    };
    expect(4, "gens")?;
    let tags_at = w.iter().skip(5).position(|(_, x)| *x == "tags").map(|i| i + 5);
    let gens_start = match w.get(5) {
        Some(&(col, _)) if Some(5) != tags_at => col,
        _ => return Err(syntax(line, w.get(5).map_or(end_col, |x| x.0), "expected generators")),
    };
    let gens_end = tags_at.map_or(end_col, |i| w[i].0);

    let chars: Vec<char> = text.chars().collect();
    let mut generators = Vec::new();
    let mut piece_start = gens_start;
    let mut col = gens_start;
    while col <= gens_end {
        let at_end = col == gens_end;
        if at_end || chars[col - 1] == ',' {
            let piece: String = chars[piece_start - 1..col - 1].iter().collect();
            let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
            let trimmed = piece.trim();
            if trimmed.is_empty() {
                return Err(syntax(line, col, "empty generator"));
            }
            let offset = piece_start + lead - 1;
            let g = Permutation::parse_cycles(trimmed, degree).map_err(|e| match e {
                Error::Syntax { column, message, .. } => syntax(line, column + offset, message),
                other => other,
            })?;
            generators.push(g);
            piece_start = col + 1;
        }
        col += 1;
    }

    let mut tags = BTreeSet::new();
    if let Some(i) = tags_at {
        for &(col, tag) in &w[i + 1..] {
            if let Some(n) = tag.strip_prefix("order=") {
                if n.parse::<u128>().map_or(true, |n| n == 0) {
                    return Err(syntax(line, col, format!("invalid order tag `{tag}`")));
                }
            }
            tags.insert(tag.to_string());
        }
    }
    Ok(GroupSpec {
        id,
        degree,
        generators,
        tags,
        source: source.clone(),
    })
}

/// Parses a single spec line.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    parse_line(text.trim_end(), 1, &Source::Inline)
}

/// Parses a whole catalog file: one spec per line, `#` comments, blank lines
/// ignored. Errors carry the line within `text`.
pub fn parse_catalog(text: &str, source: Source) -> Result<Vec<GroupSpec>> {
    let mut specs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        specs.push(parse_line(raw.trim_end(), i + 1, &source)?);
    }
    Ok(specs)
}

/// Canonical spec line; generators print in canonical cycle form and tags
/// in sorted order.
pub fn print_spec(spec: &GroupSpec) -> String {
    let gens: Vec<String> = spec.generators.iter().map(|g| g.to_string()).collect();
    let mut line = format!("group {} deg {} gens {}", spec.id, spec.degree, gens.join(", "));
    if !spec.tags.is_empty() {
        line.push_str(" tags");
        for t in &spec.tags {
            line.push(' ');
            line.push_str(t);
        }
    }
    line
}

pub fn builtin_catalog() -> Vec<GroupSpec> {
    parse_catalog(BUILTIN, Source::Builtin).expect("builtin catalog parses")
}

/// The tags whose claim can be recomputed, and the computed answer when the
/// needed structure is within caps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TagCheck {
    pub tag: String,
    pub computed: Option<bool>,
}

impl TagCheck {
    pub fn is_discrepancy(&self) -> bool {
        self.computed == Some(false)
    }
}

/// A spec together with the group it generates.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    spec: GroupSpec,
    group: PermutationGroup,
}

impl CatalogEntry {
    /// Builds the group and checks any recorded order.
    pub fn new(spec: GroupSpec, caps: Caps) -> Result<Self> {
        let group = spec.build(caps)?;
        if let Some(recorded) = spec.recorded_order() {
            if recorded != group.order() {
                return Err(Error::OrderMismatch {
                    id: spec.id.clone(),
                    recorded,
                    computed: group.order(),
                });
            }
        }
        Ok(CatalogEntry { spec, group })
    }

    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    /// Recomputes each declared tag. `computed` is `None` when caps prevent it.
    pub fn tag_checks(&self) -> Vec<TagCheck> {
        let g = &self.group;
        self.spec
            .tags
            .iter()
            .filter_map(|tag| {
                let computed = match tag.as_str() {
                    "odd-order" => Some(g.order() % 2 == 1),
                    "primitive-declared" => Some(g.is_primitive_non_abelian()),
                    "md-declared" => point_stabilizer_is_md(g),
                    "simple-declared" => g.is_simple().ok(),
                    _ => return None,
                };
                Some(TagCheck {
                    tag: tag.clone(),
                    computed,
                })
            })
            .collect()
    }

    pub fn discrepancies(&self) -> Vec<String> {
        self.tag_checks()
            .into_iter()
            .filter(TagCheck::is_discrepancy)
            .map(|t| t.tag)
            .collect()
    }
}

/// Transitive and the stabilizer of 0 is an md-stabilizer; `None` when the
/// lattice is out of reach.
pub fn point_stabilizer_is_md(g: &PermutationGroup) -> Option<bool> {
    if !g.is_transitive() {
        return Some(false);
    }
    let lattice = g.subgroup_lattice().ok()?;
    let stab = g.point_stabilizer(0).ok()?;
    Some(lattice.is_md_representation(&stab))
}

/// An ordered list of entries with unique ids.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn builtin(caps: Caps) -> Result<Self> {
        let mut c = Catalog::new();
        c.extend(builtin_catalog(), caps)?;
        Ok(c)
    }

    pub fn extend(&mut self, specs: Vec<GroupSpec>, caps: Caps) -> Result<()> {
        for spec in specs {
            if self.get(&spec.id).is_some() {
                return Err(Error::DuplicateGroup(spec.id));
            }
            self.entries.push(CatalogEntry::new(spec, caps)?);
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path, caps: Caps) -> Result<()> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: shown.clone(),
            message: e.to_string(),
        })?;
        let specs = parse_catalog(&text, Source::File(shown.clone())).map_err(|e| match e {
            Error::Syntax { .. } | Error::OrderMismatch { .. } => Error::Io {
                path: shown.clone(),
                message: e.to_string(),
            },
            other => other,
        })?;
        self.extend(specs, caps)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id() == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
