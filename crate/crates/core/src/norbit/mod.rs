//! n-orbit matrices and their k-projections.
//!
//! The n-orbit of a degree-`n` group is the set of image tuples
//! `(g(0), …, g(n−1))`, one row per element, read as a `|G| × n` matrix. Rows
//! are kept in lexicographic order, which is the sorted element order, so the
//! matrix is the element list itself. A k-orbit is the deduplicated
//! restriction of the rows to an ordered tuple of distinct columns; it is the
//! orbit of that base tuple.

mod iso;

use serde::Serialize;

pub use iso::{n_orbits_isomorphic, n_orbits_isomorphic_with_budget, IsoVerdict, DEFAULT_NODE_BUDGET};

use crate::error::{Error, Result};
use crate::group::{PermutationGroup, Subgroup};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NOrbitMatrix {
    degree: usize,
    rows: Vec<Permutation>,
}

impl NOrbitMatrix {
    /// Rows are sorted and deduplicated; every row must have degree `degree`.
    pub fn from_rows(degree: usize, mut rows: Vec<Permutation>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: r.degree(),
            });
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(NOrbitMatrix { degree, rows })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Permutation] {
        &self.rows
    }

    pub fn contains_row(&self, row: &Permutation) -> bool {
        self.rows.binary_search(row).is_ok()
    }

    /// Composing the permutations of any two rows yields a row.
    pub fn is_closed(&self) -> bool {
        self.rows.iter().all(|a| {
            self.rows
                .iter()
                .all(|b| self.contains_row(&a.compose_unchecked(b)))
        })
    }

    pub fn k_projection(&self, columns: &[usize]) -> Result<KOrbit> {
        if columns.is_empty() {
            return Err(Error::InvalidColumns("no columns selected".into()));
        }
        let mut seen = vec![false; self.degree];
        for &c in columns {
            if c >= self.degree {
                return Err(Error::InvalidColumns(format!(
                    "column {c} out of range for degree {}",
                    self.degree
                )));
            }
            if seen[c] {
                return Err(Error::InvalidColumns(format!("column {c} repeated")));
            }
            seen[c] = true;
        }
        let mut tuples: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|r| columns.iter().map(|&c| r.apply(c)).collect())
            .collect();
        tuples.sort_unstable();
        tuples.dedup();
        Ok(KOrbit {
            columns: columns.to_vec(),
            tuples,
        })
    }

    /// The permutations `σ` with `σ ∘ X = X`, tested over the rows themselves.
    pub fn automorphism_group(&self) -> Result<PermutationGroup> {
        let passing: Vec<Permutation> = self
            .rows
            .iter()
            .filter(|s| self.rows.iter().all(|r| self.contains_row(&s.compose_unchecked(r))))
            .cloned()
            .collect();
        if passing.is_empty() || !passing[0].is_identity() {
            return Err(Error::NotSubgroup("row set does not contain the identity".into()));
        }
        let count = passing.len() as u128;
        let stabilizer = Subgroup::from_sorted_elements(passing, count);
        Ok(stabilizer.to_group(Default::default()))
    }

    /// One row per line, points separated by single spaces.
    pub fn to_text(&self) -> String {
        rows_to_text(self.rows.iter().map(|r| r.images()))
    }

    pub fn to_json(&self, group_id: &str, order: u128) -> serde_json::Value {
        let rows: Vec<&[usize]> = self.rows.iter().map(|r| r.images()).collect();
        serde_json::to_value(MatrixExport {
            group: group_id,
            degree: self.degree,
            order,
            columns: None,
            rows,
        })
        .expect("plain data serializes")
    }
}

/// Projection of an n-orbit on an ordered column tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KOrbit {
    columns: Vec<usize>,
    tuples: Vec<Vec<usize>>,
}

impl KOrbit {
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn to_text(&self) -> String {
        rows_to_text(self.tuples.iter().map(Vec::as_slice))
    }

    pub fn to_json(&self, group_id: &str, degree: usize, order: u128) -> serde_json::Value {
        serde_json::to_value(MatrixExport {
            group: group_id,
            degree,
            order,
            columns: Some(&self.columns),
            rows: self.tuples.iter().map(Vec::as_slice).collect(),
        })
        .expect("plain data serializes")
    }
}

#[derive(Serialize)]
struct MatrixExport<'a> {
    group: &'a str,
    degree: usize,
    order: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<&'a [usize]>,
    rows: Vec<&'a [usize]>,
}

fn rows_to_text<'a>(rows: impl Iterator<Item = &'a [usize]>) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// The n-orbit of `group`: one row per element.
pub fn n_orbit(group: &PermutationGroup) -> Result<NOrbitMatrix> {
    Ok(NOrbitMatrix {
        degree: group.degree(),
        rows: group.elements()?.to_vec(),
    })
}

/// The n-orbit of the action on the ordered left cosets of `a`.
pub fn n_orbit_from_cosets(group: &PermutationGroup, a: &Subgroup) -> Result<NOrbitMatrix> {
    let action = group.coset_action(a)?;
    n_orbit(action.image())
}
