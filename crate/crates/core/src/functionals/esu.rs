//! Enumeration of connected induced subgraphs on `p` nodes (ESU), used to
//! count arbitrary small patterns exactly.

use super::counts::NodeCounts;
use super::pattern::{pair_bit, Pattern};
use crate::graph::Graph;
use crate::par;

/// Whether copies must match the induced subgraph exactly or only be
/// contained in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Match {
    Induced,
    Contained,
}

struct Enumerator<'a> {
    g: &'a Graph,
    p: usize,
    weight: &'a (dyn Fn(u32) -> u64 + Sync),
}

impl Enumerator<'_> {
    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.g.neighbors(a).binary_search(&b).is_ok()
    }

    fn induced_mask(&self, sub: &[usize]) -> u32 {
        let mut nodes: Vec<usize> = sub.to_vec();
        nodes.sort_unstable();
        let mut mask = 0u32;
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                if self.adjacent(nodes[a], nodes[b]) {
                    mask |= 1 << pair_bit(self.p, a, b);
                }
            }
        }
        mask
    }

    /// ESU extension step rooted at `root`; every connected `p`-set whose
    /// smallest node is `root` is visited exactly once.
    fn extend(&self, sub: &mut Vec<usize>, ext: Vec<usize>, root: usize, out: &mut dyn FnMut(&[usize], u64)) {
        if sub.len() == self.p {
            let w = (self.weight)(self.induced_mask(sub));
            if w > 0 {
                out(sub, w);
            }
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in self.g.neighbors(w) {
                if u <= root || next.contains(&u) || sub.contains(&u) || u == w {
                    continue;
                }
                // exclusive neighborhood: not adjacent to the current subgraph
                if sub.iter().any(|&s| self.adjacent(s, u)) {
                    continue;
                }
                next.push(u);
            }
            sub.push(w);
            self.extend(sub, next, root, out);
            sub.pop();
        }
    }
}

/// Counts copies of `pattern` in `g`, in total and per node.
pub fn pattern_counts(g: &Graph, pattern: &Pattern, mode: Match) -> NodeCounts {
    let (contains, exact) = pattern.mask_tables();
    let weight = move |mask: u32| -> u64 {
        match mode {
            Match::Contained => contains[mask as usize] as u64,
            Match::Induced => exact[mask as usize] as u64,
        }
    };
    let en = Enumerator {
        g,
        p: pattern.p(),
        weight: &weight,
    };
    // Roots are processed in fixed blocks, each with its own accumulator;
    // integer sums make the reduction order irrelevant.
    const BLOCK: usize = 16;
    let n = g.n();
    let partials: Vec<(u64, Vec<u64>)> = par::map_range(n.div_ceil(BLOCK), |b| {
        let mut total = 0u64;
        let mut local = vec![0u64; n];
        for root in b * BLOCK..((b + 1) * BLOCK).min(n) {
            let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
            let mut sub = vec![root];
            en.extend(&mut sub, ext, root, &mut |nodes, w| {
                total += w;
                for &v in nodes {
                    local[v] += w;
                }
            });
        }
        (total, local)
    });
    let mut per_node = vec![0u64; n];
    let mut total = 0u64;
    for (t, local) in partials {
        total += t;
        for (acc, x) in per_node.iter_mut().zip(local) {
            *acc += x;
        }
    }
    NodeCounts { total, per_node }
}

#[cfg(test)]
mod tests {
    use super::super::counts::{four_cycles_per_node, stars_per_node, triangles_per_node};
    use super::super::pattern::PatternKind;
    use super::*;

    fn connected_subsets(g: &Graph, p: usize) -> usize {
        let one = |_m: u32| 1u64;
        let en = Enumerator { g, p, weight: &one };
        let mut count = 0;
        for root in 0..g.n() {
            let ext = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
            en.extend(&mut vec![root], ext, root, &mut |_, _| count += 1);
        }
        count
    }

    #[test]
    fn connected_subsets_of_complete_graph() {
        assert_eq!(connected_subsets(&Graph::complete(6), 3), 20);
        assert_eq!(connected_subsets(&Graph::complete(7), 4), 35);
        // path on 5 nodes: every connected 3-set is a window
        assert_eq!(connected_subsets(&Graph::path(5), 3), 3);
        assert_eq!(connected_subsets(&Graph::star(4), 3), 6);
    }

    #[test]
    fn agrees_with_closed_forms() {
        let g = Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2), (5, 6), (6, 7), (7, 4), (1, 3)],
        )
        .unwrap();
        let tri = Pattern::new(PatternKind::Triangle).unwrap();
        assert_eq!(pattern_counts(&g, &tri, Match::Contained), triangles_per_node(&g));
        let c4 = Pattern::new(PatternKind::Cycle(4)).unwrap();
        assert_eq!(pattern_counts(&g, &c4, Match::Contained), four_cycles_per_node(&g));
        let s3 = Pattern::new(PatternKind::Star(3)).unwrap();
        assert_eq!(pattern_counts(&g, &s3, Match::Contained), stars_per_node(&g, 3));
    }
}
