//! Exact subgraph counters, each returning the total count and, where
//! needed, the number of copies touching every node.

use crate::graph::{sorted_intersection_len, Graph};
use crate::par;

/// Copies of a pattern in a graph: the total and, per node, how many of
/// those copies contain the node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCounts {
    pub total: u64,
    pub per_node: Vec<u64>,
}

#[inline]
pub(crate) fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `C(n, k)` as a float, exact while the value fits in 53 bits.
pub(crate) fn choose_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

pub fn edges_per_node(g: &Graph) -> NodeCounts {
    NodeCounts {
        total: g.m() as u64,
        per_node: (0..g.n()).map(|i| g.degree(i) as u64).collect(),
    }
}

/// Two-stars counted once per center: `sum_i C(d_i, 2)`.
pub fn two_star_count(g: &Graph) -> u64 {
    (0..g.n()).map(|i| choose(g.degree(i) as u64, 2)).sum()
}

/// Stars with `k >= 2` leaves: `sum_i C(d_i, k)`; node `i` lies in the stars
/// it centers and in those centered at a neighbor that use `i` as a leaf.
pub fn stars_per_node(g: &Graph, k: usize) -> NodeCounts {
    assert!(k >= 2, "single-leaf stars are edges");
    let k = k as u64;
    let per_node: Vec<u64> = par::map_range(g.n(), |i| {
        let own = choose(g.degree(i) as u64, k);
        let as_leaf: u64 = g
            .neighbors(i)
            .iter()
            .map(|&j| choose(g.degree(j) as u64 - 1, k - 1))
            .sum();
        own + as_leaf
    });
    NodeCounts {
        total: (0..g.n()).map(|i| choose(g.degree(i) as u64, k)).sum(),
        per_node,
    }
}

pub fn two_stars_per_node(g: &Graph) -> NodeCounts {
    stars_per_node(g, 2)
}

/// Dense bit rows are used for intersections once the neighbor lists are
/// longer than a row of words.
const MAX_BITSET_NODES: usize = 1 << 14;

struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(g: &Graph) -> BitRows {
        let words = g.n().div_ceil(64);
        let mut bits = vec![0u64; words * g.n()];
        for i in 0..g.n() {
            let row = &mut bits[i * words..(i + 1) * words];
            for &j in g.neighbors(i) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
        BitRows { words, bits }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    fn common(&self, i: usize, j: usize) -> u64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }
}

fn use_bitset(g: &Graph) -> bool {
    let n = g.n();
    n > 0 && n <= MAX_BITSET_NODES && n.div_ceil(64) < 2 * g.m() / n
}

/// For every edge `(i, j)` with `i < j`, in [`Graph::edges`] order grouped by
/// row, the number of common neighbors.
fn upper_edge_common_neighbors(g: &Graph) -> Vec<Vec<u64>> {
    let upper = |i: usize| {
        let nb = g.neighbors(i);
        &nb[nb.partition_point(|&j| j <= i)..]
    };
    if use_bitset(g) {
        let rows = BitRows::new(g);
        par::map_range(g.n(), |i| upper(i).iter().map(|&j| rows.common(i, j)).collect())
    } else {
        par::map_range(g.n(), |i| {
            upper(i)
                .iter()
                .map(|&j| sorted_intersection_len(g.neighbors(i), g.neighbors(j)) as u64)
                .collect()
        })
    }
}

/// Total triangles via forward intersection over higher-numbered neighbors.
pub fn triangle_count(g: &Graph) -> u64 {
    let upper = |i: usize| {
        let nb = g.neighbors(i);
        &nb[nb.partition_point(|&j| j <= i)..]
    };
    par::map_range(g.n(), |i| {
        let ui = upper(i);
        ui.iter()
            .map(|&j| sorted_intersection_len(ui, upper(j)) as u64)
            .sum::<u64>()
    })
    .into_iter()
    .sum()
}

/// Triangles per node from the common-neighbor count of every edge: each
/// triangle at `i` is seen through both of its edges incident to `i`.
pub fn triangles_per_node(g: &Graph) -> NodeCounts {
    let rows = upper_edge_common_neighbors(g);
    let mut twice = vec![0u64; g.n()];
    let mut edge_sum = 0u64;
    for (i, row) in rows.iter().enumerate() {
        let nb = g.neighbors(i);
        let start = nb.partition_point(|&j| j <= i);
        for (&j, &c) in nb[start..].iter().zip(row) {
            twice[i] += c;
            twice[j] += c;
            edge_sum += c;
        }
    }
    NodeCounts {
        total: edge_sum / 3,
        per_node: twice.into_iter().map(|t| t / 2).collect(),
    }
}

/// Four-cycles (as subgraphs, not necessarily induced). A four-cycle through
/// `i` is fixed by the opposite node `j` and a pair of common neighbors, so
/// node `i` lies in `sum_j C(cn(i, j), 2)` of them.
pub fn four_cycles_per_node(g: &Graph) -> NodeCounts {
    let n = g.n();
    let per_node: Vec<u64> = par::map_range(n, |i| {
        let mut cn = vec![0u32; n];
        let mut touched = Vec::new();
        for &a in g.neighbors(i) {
            for &j in g.neighbors(a) {
                if j != i {
                    if cn[j] == 0 {
                        touched.push(j);
                    }
                    cn[j] += 1;
                }
            }
        }
        touched.iter().map(|&j| choose(cn[j] as u64, 2)).sum()
    });
    NodeCounts {
        total: per_node.iter().sum::<u64>() / 4,
        per_node,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(choose(5, 2), 10);
        assert_eq!(choose(2, 3), 0);
        assert_eq!(choose(0, 0), 1);
        assert_eq!(choose_f64(10, 3), 120.0);
        assert_eq!(choose_f64(3000, 2), 4_498_500.0);
        assert_eq!(choose_f64(4, 3), 4.0);
    }

    #[test]
    fn complete_graph_counts() {
        let k5 = Graph::complete(5);
        let t = triangles_per_node(&k5);
        assert_eq!(t.total, 10);
        assert_eq!(t.per_node, vec![6; 5]);
        assert_eq!(triangle_count(&k5), 10);
        let w = two_stars_per_node(&k5);
        assert_eq!(w.total, 5 * 6);
        assert_eq!(two_star_count(&k5), 30);
        let c = four_cycles_per_node(&k5);
        // 3 four-cycles on each 4-set
        assert_eq!(c.total, 15);
        assert_eq!(c.per_node.iter().sum::<u64>(), 4 * 15);
    }

    #[test]
    fn star_counts() {
        let s = Graph::star(4);
        let c = stars_per_node(&s, 3);
        assert_eq!(c.total, 4);
        assert_eq!(c.per_node, vec![4, 3, 3, 3, 3]);
        assert_eq!(triangles_per_node(&s).total, 0);
    }

    #[test]
    fn bitset_and_merge_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut e = Vec::new();
        for i in 0..300 {
            for j in i + 1..300 {
                if rng.gen::<f64>() < 0.4 {
                    e.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(300, e).unwrap();
        assert!(use_bitset(&g));
        let rows = BitRows::new(&g);
        for (i, j) in g.edges().step_by(97) {
            assert_eq!(
                rows.common(i, j),
                sorted_intersection_len(g.neighbors(i), g.neighbors(j)) as u64
            );
        }
        assert_eq!(triangles_per_node(&g).total, triangle_count(&g));
    }
}
