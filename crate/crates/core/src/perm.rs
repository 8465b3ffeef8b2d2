//! Permutations of the point set `0..n` and their cycle structure.
//!
//! A [`Permutation`] is stored as its dense image map. Composition follows the
//! "right acts first" convention throughout the crate:
//! `p.compose(&q)` maps `i` to `p(q(i))`.
//!
//! The canonical text form is cycle notation with each cycle rotated to start
//! at its smallest point, cycles ordered by that point and fixed points
//! omitted. The identity prints as `()`.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image map, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || seen[x] {
                return Err(Error::NotBijection { degree });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if touched[x] {
                    return Err(Error::NotBijection { degree });
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)` or `()`.
    ///
    /// Errors carry a 1-based column; the line is always reported as 1.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        for cycle in &cycles {
            for &(point, column) in cycle {
                if point >= degree {
                    return Err(Error::Syntax {
                        line: 1,
                        column,
                        message: format!("point {point} out of range for degree {degree}"),
                    });
                }
            }
        }
        let plain: Vec<Vec<usize>> = cycles
            .iter()
            .map(|c| c.iter().map(|&(p, _)| p).collect())
            .collect();
        Permutation::from_cycles(degree, &plain).map_err(|e| Error::Syntax {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `s ∘ self ∘ s⁻¹`, the permutation that does on `s(i)` what `self` does on `i`.
    pub fn conjugate_by(&self, s: &Permutation) -> Permutation {
        let mut out = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[s.images[i]] = s.images[x];
        }
        Permutation { images: out }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn fixed_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .count()
    }

    /// Smallest point moved by the permutation, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    /// All cycles including 1-cycles, each starting at its minimum, ordered by minimum.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycle_decomposition().iter().map(Vec::len).collect())
    }

    /// True iff every cycle has the same length; the identity qualifies.
    pub fn is_regular_element(&self) -> bool {
        self.cycle_type().is_uniform()
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        self.cycle_decomposition()
            .iter()
            .map(Vec::len)
            .fold(1, |acc, len| acc / gcd(acc, len) * len)
    }

    /// Direct sum: `self` on the first block of points, `other` shifted after it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree();
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&x| x + shift))
            .collect();
        Permutation { images }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

type Located = (usize, usize);

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<Located>>> {
    let syntax = |column: usize, message: &str| Error::Syntax {
        line: 1,
        column,
        message: message.to_string(),
    };
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut cycles = Vec::new();
    let mut current: Option<Vec<Located>> = None;
    let mut i = 0;
    let mut saw_any = false;
    while i < chars.len() {
        let (offset, c) = chars[i];
        let column = text[..offset].chars().count() + 1;
        match c {
            '(' => {
                if current.is_some() {
                    return Err(syntax(column, "nested `(`"));
                }
                current = Some(Vec::new());
                saw_any = true;
                i += 1;
            }
            ')' => {
                let cycle = current
                    .take()
                    .ok_or_else(|| syntax(column, "unmatched `)`"))?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            c if c.is_ascii_digit() => {
                let Some(cycle) = current.as_mut() else {
                    return Err(syntax(column, "point outside of a cycle"));
                };
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |&(o, _)| o);
                let point: usize = text[offset..end]
                    .parse()
                    .map_err(|_| syntax(column, "point does not fit in usize"))?;
                cycle.push((point, column));
                i = j;
            }
            other => return Err(syntax(column, &format!("unexpected character `{other}`"))),
        }
    }
    if current.is_some() {
        let column = text.chars().count() + 1;
        return Err(syntax(column, "unterminated cycle, expected `)`"));
    }
    if !saw_any {
        return Err(syntax(1, "expected a cycle"));
    }
    Ok(cycles)
}

impl Mul<&Permutation> for &Permutation {
    type Output = Permutation;

    /// Same as [`Permutation::compose`]; panics on degree mismatch.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for cycle in self.cycle_decomposition() {
            if cycle.len() == 1 {
                continue;
            }
            wrote = true;
            write!(f, "(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Multiset of cycle lengths, kept sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    lengths: Vec<usize>,
}

impl CycleType {
    pub fn from_lengths(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths }
    }

    pub fn cycle_lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn degree(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn fixed_count(&self) -> usize {
        self.lengths.iter().filter(|&&l| l == 1).count()
    }

    pub fn is_uniform(&self) -> bool {
        self.lengths.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.lengths.len() {
            let len = self.lengths[i];
            let mut j = i;
            while j < self.lengths.len() && self.lengths[j] == len {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{len}")?;
            } else {
                write!(f, "{len}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn compose_examples() {
        let q = p("(1 3)(0 2)", 4);
        assert_eq!(Permutation::identity(4).compose(&q).unwrap(), q);
        assert!(q.compose(&q.inverse()).unwrap().is_identity());
        // q first: 0→1→2, 1→0→1, 2→2→0
        assert_eq!(p("(0 1 2)", 3).compose(&p("(0 1)", 3)).unwrap(), p("(0 2)", 3));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = Permutation::identity(3)
            .compose(&Permutation::identity(4))
            .unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn cycle_decomposition_examples() {
        let id = Permutation::identity(5);
        assert_eq!(id.cycle_decomposition().len(), 5);
        assert_eq!(id.cycle_type().fixed_count(), 5);

        let full = p("(0 1 2 3 4 5 6)", 7);
        assert_eq!(full.cycle_type().cycle_lengths(), &[7]);
        assert_eq!(full.cycle_type().fixed_count(), 0);

        // x ↦ 2x mod 7
        let doubling = Permutation::from_images((0..7).map(|x| 2 * x % 7).collect()).unwrap();
        assert_eq!(doubling, p("(1 2 4)(3 6 5)", 7));
        assert_eq!(doubling.cycle_type().cycle_lengths(), &[3, 3, 1]);
        assert_eq!(doubling.cycle_type().fixed_count(), 1);
        assert_eq!(doubling.fixed_points(), vec![0]);
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(Permutation::identity(3).fixed_points(), vec![0, 1, 2]);
        assert!(p("(0 1 2)", 3).fixed_points().is_empty());
    }

    #[test]
    fn regular_element_examples() {
        assert!(p("(0 1)(2 3)", 4).is_regular_element());
        assert!(!p("(0 1)(2 3 4)", 5).is_regular_element());
        assert!(p("(0 1 2 3 4 5 6)", 7).is_regular_element());
        assert!(Permutation::identity(3).is_regular_element());
    }

    #[test]
    fn canonical_text_form() {
        assert_eq!(p("(3 6 5)(2 4 1)", 7).to_string(), "(1 2 4)(3 6 5)");
        assert_eq!(p("(5 3 6)", 7).to_string(), "(3 6 5)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert_eq!(p("(2)(0 1)", 3).to_string(), "(0 1)");
        assert_eq!(CycleType::from_lengths(vec![1, 3, 3]).to_string(), "3^2 1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Permutation::parse_cycles("(0 1", 3),
            Err(Error::Syntax { column: 5, .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(0 9)", 7),
            Err(Error::Syntax { column: 4, .. })
        ));
        assert!(Permutation::parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(Permutation::parse_cycles("0 1", 3).is_err());
        assert!(Permutation::parse_cycles("", 3).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![]).is_err());
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let g = p("(0 1 2)", 4);
        let s = p("(2 3)", 4);
        assert_eq!(g.conjugate_by(&s), p("(0 1 3)", 4));
        assert_eq!(g.conjugate_by(&s), &(&s * &g) * &s.inverse());
    }

    fn perm_strategy(max_degree: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_degree)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn perm_pair(max_degree: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_degree).prop_flat_map(|n| {
            let v: Vec<usize> = (0..n).collect();
            (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle()).prop_map(|(a, b)| {
                (
                    Permutation::from_images(a).unwrap(),
                    Permutation::from_images(b).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn compose_then_undo((p, q) in perm_pair(12)) {
            prop_assert_eq!((&(&p * &q)) * &q.inverse(), p);
        }

        #[test]
        fn cycles_round_trip(p in perm_strategy(12)) {
            let rebuilt = Permutation::from_cycles(p.degree(), &p.cycle_decomposition()).unwrap();
            prop_assert_eq!(&rebuilt, &p);
            let ct = p.cycle_type();
            prop_assert_eq!(ct.degree(), p.degree());
            prop_assert_eq!(ct.fixed_count(), p.fixed_points().len());
            let distinct: std::collections::BTreeSet<_> = ct.cycle_lengths().iter().collect();
            prop_assert_eq!(p.is_regular_element(), distinct.len() == 1);
        }

        #[test]
        fn text_round_trip(p in perm_strategy(12)) {
            prop_assert_eq!(Permutation::parse_cycles(&p.to_string(), p.degree()).unwrap(), p);
        }
    }
}
