//! Brute-force reference counters for testing.
//!
//! Everything here enumerates all `C(n, p)` node sets and checks every
//! labeled copy of the pattern against the node set's adjacency, so it is `O(n^p)` and refuses
//! graphs with more than [`MAX_ORACLE_NODES`] nodes.

use super::counts::choose_f64;
use super::esu::Match;
use super::pattern::Pattern;
use super::{LooVector, StatKind};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, leave_one_out, Graph};

pub const MAX_ORACLE_NODES: usize = 60;

fn for_each_combination(n: usize, p: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == p {
            f(cur);
            return;
        }
        for v in start..n {
            if n - v < p - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, p, cur, f);
            cur.pop();
        }
    }
    rec(0, n, p, &mut Vec::with_capacity(p), f);
}

/// Number of labeled copies `S` of `pattern` on node sets of `g` with
/// `S ⊆ G[S]` (contained) or `S = G[S]` (induced).
pub fn brute_force_copies(g: &Graph, pattern: &Pattern, mode: Match) -> Result<u64> {
    if g.n() > MAX_ORACLE_NODES {
        return Err(Error::Argument(format!(
            "brute-force oracle limited to {MAX_ORACLE_NODES} nodes"
        )));
    }
    let p = pattern.p();
    let rows: Vec<u64> = (0..g.n())
        .map(|i| g.neighbors(i).iter().fold(0u64, |acc, &j| acc | 1 << j))
        .collect();
    let all_pairs: Vec<(usize, usize)> = (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
    let bit = |a: usize, b: usize| 1u32 << all_pairs.iter().position(|&q| q == (a.min(b), a.max(b))).unwrap();
    let copies: Vec<u32> = pattern
        .copy_edge_lists()
        .iter()
        .map(|copy| copy.iter().fold(0, |acc, &(a, b)| acc | bit(a, b)))
        .collect();
    let mut count = 0u64;
    for_each_combination(g.n(), p, &mut |set| {
        let present = all_pairs.iter().enumerate().fold(0u32, |acc, (k, &(a, b))| {
            acc | (((rows[set[a]] >> set[b]) & 1) as u32) << k
        });
        count += copies
            .iter()
            .filter(|&&c| match mode {
                Match::Contained => c & !present == 0,
                Match::Induced => c == present,
            })
            .count() as u64;
    });
    Ok(count)
}

/// Any count statistic evaluated from brute-force counts alone.
pub fn brute_force_statistic(g: &Graph, kind: &StatKind, rho: f64) -> Result<f64> {
    let n = g.n();
    let tri = || brute_force_copies(g, &Pattern::new(super::PatternKind::Triangle).unwrap(), Match::Contained);
    let two_star_centers = || {
        // one per (center, unordered leaf pair)
        let mut w = 0u64;
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    if i != j && i != k && g.has_edge(i, j) && g.has_edge(i, k) {
                        w += 1;
                    }
                }
            }
        }
        w
    };
    Ok(match kind {
        StatKind::EdgeDensity => {
            let mut m = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    m += g.has_edge(i, j) as u64;
                }
            }
            m as f64 / (choose_f64(n, 2) * rho)
        }
        StatKind::TriangleDensity => tri()? as f64 / (choose_f64(n, 3) * rho.powi(3)),
        StatKind::TwoStarDensity => two_star_centers() as f64 / (choose_f64(n, 3) * rho.powi(2)),
        StatKind::Transitivity => {
            let w = two_star_centers();
            if w == 0 {
                return Err(Error::UndefinedStatistic("no two-stars".into()));
            }
            tri()? as f64 / (w as f64 * rho)
        }
        StatKind::PatternP(pat) | StatKind::PatternQ(pat) => {
            let mode = if matches!(kind, StatKind::PatternP(_)) { Match::Induced } else { Match::Contained };
            let c = brute_force_copies(g, pat, mode)?;
            c as f64 / (choose_f64(n, pat.p()) * pat.iso_count() as f64 * rho.powi(pat.e() as i32))
        }
        StatKind::Eigenvalue(_) => {
            return Err(Error::Argument("no brute-force oracle for eigenvalues".into()))
        }
    })
}

/// Leave-one-out vector by recounting every induced subgraph from scratch.
pub fn brute_force_loo(g: &Graph, kind: &StatKind, rho: f64) -> Result<LooVector> {
    let values = (0..g.n())
        .map(|i| {
            let h = induced_subgraph(g, &leave_one_out(g, i)?)?;
            brute_force_statistic(&h, kind, rho)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(LooVector {
        values,
        full_value: brute_force_statistic(g, kind, rho)?,
        rho_used: rho,
        counts: None,
    })
}
