//! Small connected patterns and their labeled copies.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest pattern size supported by the enumeration-based counters.
pub const MAX_PATTERN_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Edge,
    TwoStar,
    Triangle,
    /// Path with `k` edges.
    Path(usize),
    /// Star with `k` leaves.
    Star(usize),
    /// Cycle on `p` nodes.
    Cycle(usize),
}

/// A pattern graph `R` on nodes `0..p` together with every labeled copy of it
/// on the same node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    kind: PatternKind,
    p: usize,
    edges: Vec<(usize, usize)>,
    /// Each labeled copy as a bitmask over the pairs of `0..p`.
    copies: Vec<u32>,
}

/// Bit index of the pair `a < b` among the `p (p - 1) / 2` pairs of `0..p`.
#[inline]
pub(crate) fn pair_bit(p: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < p);
    // pairs (0,1),(0,2),...,(0,p-1),(1,2),...
    a * (2 * p - a - 1) / 2 + (b - a - 1)
}

fn mask_of(p: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> u32 {
    edges.into_iter().fold(0u32, |m, (a, b)| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        m | (1 << pair_bit(p, a, b))
    })
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(p), &mut vec![false; p], &mut out);
    out
}

impl Pattern {
    pub fn new(kind: PatternKind) -> Result<Pattern> {
        let (p, edges): (usize, Vec<(usize, usize)>) = match kind {
            PatternKind::Edge => (2, vec![(0, 1)]),
            PatternKind::TwoStar => (3, vec![(0, 1), (0, 2)]),
            PatternKind::Triangle => (3, vec![(0, 1), (1, 2), (0, 2)]),
            PatternKind::Path(k) => {
                if k == 0 {
                    return Err(Error::Argument("path needs at least one edge".into()));
                }
                (k + 1, (0..k).map(|i| (i, i + 1)).collect())
            }
            PatternKind::Star(k) => {
                if k == 0 {
                    return Err(Error::Argument("star needs at least one leaf".into()));
                }
                (k + 1, (1..=k).map(|i| (0, i)).collect())
            }
            PatternKind::Cycle(c) => {
                if c < 3 {
                    return Err(Error::Argument("cycle needs at least 3 nodes".into()));
                }
                (c, (0..c).map(|i| (i, (i + 1) % c)).collect())
            }
        };
        if p > MAX_PATTERN_NODES {
            return Err(Error::Argument(format!(
                "patterns are limited to {MAX_PATTERN_NODES} nodes, got {p}"
            )));
        }
        let copies: BTreeSet<u32> = permutations(p)
            .iter()
            .map(|perm| mask_of(p, edges.iter().map(|&(a, b)| (perm[a], perm[b]))))
            .collect();
        Ok(Pattern {
            kind,
            p,
            edges,
            copies: copies.into_iter().collect(),
        })
    }

    /// Parses `edge`, `two-star`, `triangle`, `path<k>`, `star<k>`, `cycle<p>`.
    pub fn parse(name: &str) -> Result<Pattern> {
        let num = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
        let kind = match name {
            "edge" => PatternKind::Edge,
            "two-star" | "twostar" => PatternKind::TwoStar,
            "triangle" => PatternKind::Triangle,
            _ => {
                if let Some(k) = num("path") {
                    PatternKind::Path(k)
                } else if let Some(k) = num("star") {
                    PatternKind::Star(k)
                } else if let Some(k) = num("cycle") {
                    PatternKind::Cycle(k)
                } else {
                    return Err(Error::Argument(format!("unknown pattern `{name}`")));
                }
            }
        };
        Pattern::new(kind)
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Number of nodes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of edges.
    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of labeled graphs on `p` nodes isomorphic to the pattern.
    pub fn iso_count(&self) -> usize {
        self.copies.len()
    }

    /// Labeled copies as edge lists on `0..p`.
    pub fn copy_edge_lists(&self) -> Vec<Vec<(usize, usize)>> {
        let pairs: Vec<(usize, usize)> = (0..self.p)
            .flat_map(|a| (a + 1..self.p).map(move |b| (a, b)))
            .collect();
        self.copies
            .iter()
            .map(|&mask| {
                pairs
                    .iter()
                    .copied()
                    .filter(|&(a, b)| mask & (1 << pair_bit(self.p, a, b)) != 0)
                    .collect()
            })
            .collect()
    }

    /// For every graph on `0..p` (as a pair mask), the number of labeled
    /// copies it contains, and whether it is itself a copy.
    pub(crate) fn mask_tables(&self) -> (Vec<u32>, Vec<bool>) {
        let pairs = self.p * (self.p - 1) / 2;
        let size = 1usize << pairs;
        let mut contains = vec![0u32; size];
        let mut exact = vec![false; size];
        for &c in &self.copies {
            exact[c as usize] = true;
        }
        for (mask, slot) in contains.iter_mut().enumerate() {
            let m = mask as u32;
            *slot = self.copies.iter().filter(|&&c| c & m == c).count() as u32;
        }
        (contains, exact)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PatternKind::Edge => write!(f, "edge"),
            PatternKind::TwoStar => write!(f, "two-star"),
            PatternKind::Triangle => write!(f, "triangle"),
            PatternKind::Path(k) => write!(f, "path{k}"),
            PatternKind::Star(k) => write!(f, "star{k}"),
            PatternKind::Cycle(c) => write!(f, "cycle{c}"),
        }
    }
}
