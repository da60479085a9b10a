//! Immutable undirected simple graphs stored as sorted adjacency (CSR).

mod io;

pub use io::{load_edge_list, write_edge_list, EdgeListOptions, LoadedGraph};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Both directions of every edge are stored and each neighbor list is
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Self-loops and duplicate
    /// edges (in either orientation) are dropped; the number dropped is
    /// returned alongside the graph.
    pub fn from_edges_counting<I>(n: usize, edges: I) -> Result<(Graph, usize)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut seen = 0usize;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            seen += 1;
            if u == v {
                continue;
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut kept_twice = 0usize;
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
            kept_twice += l.len();
        }
        let dropped = seen - kept_twice / 2;
        Ok((Graph::from_sorted_lists(lists), dropped))
    }

    /// Convenience wrapper around [`Graph::from_edges_counting`].
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges_counting(n, edges).map(|(g, _)| g)
    }

    /// Lists must already satisfy the `Graph` invariants.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<usize>>) -> Graph {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for l in lists {
            neighbors.extend_from_slice(&l);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Graph {
        let lists = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph::from_sorted_lists(lists)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are in range")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are in range")
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are in range")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n() && j < self.n() && self.neighbors(i).binary_search(&j).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Checks the structural invariants: symmetry, no loops, strictly
    /// increasing neighbor lists.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            let nb = self.neighbors(i);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Input(format!("neighbor list of {i} not strictly increasing")));
                }
            }
            for &j in nb {
                if j >= n {
                    return Err(Error::Input(format!("neighbor {j} of {i} out of range")));
                }
                if j == i {
                    return Err(Error::Input(format!("self-loop at {i}")));
                }
                if self.neighbors(j).binary_search(&i).is_err() {
                    return Err(Error::Input(format!("edge ({i}, {j}) not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::Argument("permutation length differs from node count".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Argument("not a permutation".into()));
            }
        }
        Graph::from_edges(n, self.edges().map(|(i, j)| (perm[i], perm[j])))
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            Err(Error::Argument(format!("node {i} out of range for {} nodes", self.n())))
        } else {
            Ok(())
        }
    }
}

/// Size of the intersection of two strictly increasing slices.
#[inline]
pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut x, mut y, mut c) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                x += 1;
                y += 1;
            }
        }
    }
    c
}

/// Number of common neighbors of `i` and `j`, by merging sorted lists.
pub fn common_neighbor_count(g: &Graph, i: usize, j: usize) -> Result<usize> {
    g.check_node(i)?;
    g.check_node(j)?;
    if i == j {
        return Err(Error::Argument("common_neighbor_count needs two distinct nodes".into()));
    }
    Ok(sorted_intersection_len(g.neighbors(i), g.neighbors(j)))
}

/// Ordered selection of retained nodes with the order-preserving relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSubset {
    kept: Vec<usize>,
    mapping: Vec<Option<usize>>,
}

impl NodeSubset {
    /// Builds a subset of `0..n`. `kept` may be given in any order; it is
    /// sorted and must not contain duplicates.
    pub fn new(n: usize, mut kept: Vec<usize>) -> Result<NodeSubset> {
        kept.sort_unstable();
        let mut mapping = vec![None; n];
        for (new, &old) in kept.iter().enumerate() {
            if old >= n {
                return Err(Error::Argument(format!("node {old} out of range for {n} nodes")));
            }
            if mapping[old].replace(new).is_some() {
                return Err(Error::Argument(format!("node {old} listed twice")));
            }
        }
        Ok(NodeSubset { kept, mapping })
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    /// New id of an original node, if retained.
    pub fn map(&self, old: usize) -> Option<usize> {
        self.mapping.get(old).copied().flatten()
    }

    /// Size of the node universe the subset was drawn from.
    pub fn universe(&self) -> usize {
        self.mapping.len()
    }
}

/// All nodes except `i`.
pub fn leave_one_out(g: &Graph, i: usize) -> Result<NodeSubset> {
    if g.n() < 2 {
        return Err(Error::Degenerate("leave-one-out needs at least 2 nodes".into()));
    }
    g.check_node(i)?;
    NodeSubset::new(g.n(), (0..g.n()).filter(|&j| j != i).collect())
}

/// Subgraph induced by `subset`, relabeled to `0..subset.len()`.
pub fn induced_subgraph(g: &Graph, subset: &NodeSubset) -> Result<Graph> {
    if subset.universe() != g.n() {
        return Err(Error::Argument(format!(
            "subset drawn from {} nodes applied to a graph with {}",
            subset.universe(),
            g.n()
        )));
    }
    let lists = subset
        .kept()
        .iter()
        .map(|&old| {
            // kept is sorted and mapping is monotone, so the result stays sorted
            g.neighbors(old).iter().filter_map(|&j| subset.map(j)).collect()
        })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}
