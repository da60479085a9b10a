//! Whitespace-separated edge-list text format.
//!
//! One edge per line, two integer tokens. Lines starting with `#` are
//! comments, except that a comment of the form `# nodes=K` declares the node
//! universe (files written by [`write_edge_list`] carry one so that isolated
//! nodes survive a round trip).

use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeListOptions {
    /// Subtract one from every id.
    pub one_indexed: bool,
    /// Node universe override; takes precedence over a `# nodes=K` header.
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Edge lines discarded as self-loops or duplicates.
    pub dropped: usize,
}

fn parse_nodes_header(comment: &str) -> Option<&str> {
    let rest = comment.trim_start_matches('#').trim();
    rest.strip_prefix("nodes=").map(str::trim)
}

pub fn load_edge_list<R: BufRead>(reader: R, opts: EdgeListOptions) -> Result<LoadedGraph> {
    let mut edges = Vec::new();
    let mut header_nodes: Option<usize> = None;
    let mut max_id: Option<usize> = None;
    let shift: i64 = if opts.one_indexed { 1 } else { 0 };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(v) = parse_nodes_header(trimmed) {
                let k = v.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad node count `{v}`"),
                })?;
                header_nodes = Some(k);
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected two node ids".into(),
            })?;
            let raw = tok.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad node id `{tok}`"),
            })?;
            let id = raw - shift;
            if id < 0 {
                return Err(Error::Input(format!("line {line_no}: negative node id {id}")));
            }
            Ok(id as usize)
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "more than two tokens".into(),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }

    let needed = max_id.map_or(0, |m| m + 1);
    let n = match opts.nodes.or(header_nodes) {
        Some(k) if k < needed => {
            return Err(Error::Input(format!(
                "declared {k} nodes but edge list references node {}",
                needed - 1
            )))
        }
        Some(k) => k,
        None => needed,
    };
    let (graph, dropped) = Graph::from_edges_counting(n, edges)?;
    Ok(LoadedGraph { graph, dropped })
}

/// Writes `g` with a `# nodes=N` header, one `i j` line per edge (`i < j`).
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes={}", g.n())?;
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str, one_indexed: bool) -> Result<LoadedGraph> {
        load_edge_list(
            s.as_bytes(),
            EdgeListOptions {
                one_indexed,
                nodes: None,
            },
        )
    }

    #[test]
    fn path() {
        let l = load("0 1\n1 2\n", false).unwrap();
        assert_eq!(l.graph, Graph::path(3));
        assert_eq!(l.dropped, 0);
    }

    #[test]
    fn duplicates_and_self_loops_dropped() {
        let l = load("0 1\n1 0\n0 0\n", false).unwrap();
        assert_eq!((l.graph.n(), l.graph.m(), l.dropped), (2, 1, 2));
    }

    #[test]
    fn one_indexed_triangle() {
        let l = load("1 2\n2 3\n3 1\n", true).unwrap();
        assert_eq!(l.graph, Graph::complete(3));
    }

    #[test]
    fn comments_and_blank_lines() {
        let l = load("# a comment\n\n0 1\n  # indented\n1\t2\n", false).unwrap();
        assert_eq!(l.graph.m(), 2);
    }

    #[test]
    fn malformed_token_reports_line() {
        match load("0 1\n1 x\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("0\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load("0 1 2\n", false), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn negative_after_shift() {
        assert!(matches!(load("0 1\n", true), Err(Error::Input(_))));
        assert!(matches!(load("-1 1\n", false), Err(Error::Input(_))));
    }

    #[test]
    fn node_universe_overrides() {
        let l = load("# nodes=5\n0 1\n", false).unwrap();
        assert_eq!(l.graph.n(), 5);
        let l = load_edge_list(
            "# nodes=5\n0 1\n".as_bytes(),
            EdgeListOptions {
                one_indexed: false,
                nodes: Some(7),
            },
        )
        .unwrap();
        assert_eq!(l.graph.n(), 7);
        assert!(matches!(load("# nodes=1\n0 1\n", false), Err(Error::Input(_))));
    }

    #[test]
    fn write_then_read_round_trips_isolated_nodes() {
        let g = Graph::from_edges(6, [(0, 3), (1, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = load(std::str::from_utf8(&buf).unwrap(), false).unwrap();
        assert_eq!(back.graph, g);
    }
}
