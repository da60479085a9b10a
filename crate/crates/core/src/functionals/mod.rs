//! Graph functionals and their leave-one-node-out vectors. See [`StatKind`]
//! for the menu.
//!
//! Two normalizations coexist on purpose. The named densities divide raw
//! counts by `C(n, p) ρ^e` only (two-stars are counted once per center), while
//! [`StatKind::PatternP`]/[`StatKind::PatternQ`] additionally divide by the
//! number of labeled copies of the pattern.

mod counts;
pub mod eigen;
mod esu;
pub mod oracle;
mod pattern;

use std::fmt;
use std::str::FromStr;

pub use counts::NodeCounts;
pub use eigen::top_eigenvalues;
pub use esu::Match;
pub use pattern::{Pattern, PatternKind, MAX_PATTERN_NODES};

use counts::choose_f64;

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, leave_one_out, Graph};
use crate::par;

/// What a statistic computes.
#[derive(Debug, Clone, PartialEq)]
pub enum StatKind {
    EdgeDensity,
    TriangleDensity,
    TwoStarDensity,
    /// Triangle density over two-star density.
    Transitivity,
    /// Induced (exact-match) pattern frequency.
    PatternP(Pattern),
    /// Containment pattern frequency.
    PatternQ(Pattern),
    /// The `k`-th largest-magnitude adjacency eigenvalue (1-based), raw.
    Eigenvalue(usize),
}

/// Sparsity normalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoMode {
    Known(f64),
    /// Observed edge density of the full graph.
    PlugIn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statistic {
    pub kind: StatKind,
    pub rho: RhoMode,
}

/// Leave-one-node-out values of a statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct LooVector {
    /// `values[i]`: the statistic on the graph without node `i`.
    pub values: Vec<f64>,
    /// The statistic on the full graph.
    pub full_value: f64,
    pub rho_used: f64,
    /// Integer numerators when every value is `count / scale`.
    pub counts: Option<LooCounts>,
}

/// `values[i] == counts[i] as f64 / scale` for count statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct LooCounts {
    pub counts: Vec<u64>,
    pub scale: f64,
}

impl LooCounts {
    /// `sum_i (values[i] - mean)^2` from `n sum c^2 - (sum c)^2`, which is
    /// an exact integer; `None` if it would overflow.
    pub fn sum_sq_deviation(&self) -> Option<f64> {
        let n = self.counts.len() as u128;
        let (mut s, mut s2) = (0u128, 0u128);
        for &c in &self.counts {
            let c = c as u128;
            s = s.checked_add(c)?;
            s2 = s2.checked_add(c.checked_mul(c)?)?;
        }
        let num = n.checked_mul(s2)?.checked_sub(s.checked_mul(s)?)?;
        Some(num as f64 / (n as f64 * self.scale * self.scale))
    }
}

impl LooVector {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

impl StatKind {
    /// Smallest graph the statistic is defined on.
    pub fn min_nodes(&self) -> usize {
        match self {
            StatKind::EdgeDensity => 2,
            StatKind::TriangleDensity | StatKind::TwoStarDensity | StatKind::Transitivity => 3,
            StatKind::PatternP(p) | StatKind::PatternQ(p) => p.p(),
            StatKind::Eigenvalue(k) => *k,
        }
    }

    /// True for statistics that are normalized subgraph counts, for which
    /// the leave-one-out mean equals the full-graph value.
    pub fn is_count(&self) -> bool {
        !matches!(self, StatKind::Transitivity | StatKind::Eigenvalue(_))
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatKind::EdgeDensity => write!(f, "edge-density"),
            StatKind::TriangleDensity => write!(f, "triangle-density"),
            StatKind::TwoStarDensity => write!(f, "twostar-density"),
            StatKind::Transitivity => write!(f, "transitivity"),
            StatKind::PatternP(p) => write!(f, "pattern-p:{p}"),
            StatKind::PatternQ(p) => write!(f, "pattern-q:{p}"),
            StatKind::Eigenvalue(k) => write!(f, "eigenvalue:{k}"),
        }
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<StatKind> {
        Ok(match s {
            "edge-density" => StatKind::EdgeDensity,
            "triangle-density" => StatKind::TriangleDensity,
            "twostar-density" => StatKind::TwoStarDensity,
            "transitivity" => StatKind::Transitivity,
            _ => {
                if let Some(p) = s.strip_prefix("pattern-p:") {
                    StatKind::PatternP(Pattern::parse(p)?)
                } else if let Some(p) = s.strip_prefix("pattern-q:") {
                    StatKind::PatternQ(Pattern::parse(p)?)
                } else if let Some(k) = s.strip_prefix("eigenvalue:") {
                    let k: usize = k
                        .parse()
                        .map_err(|_| Error::Argument(format!("bad eigenvalue index `{k}`")))?;
                    if k == 0 {
                        return Err(Error::Argument("eigenvalue index starts at 1".into()));
                    }
                    StatKind::Eigenvalue(k)
                } else {
                    return Err(Error::Argument(format!("unknown statistic `{s}`")));
                }
            }
        })
    }
}

impl FromStr for RhoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<RhoMode> {
        if s == "plugin" {
            return Ok(RhoMode::PlugIn);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Argument(format!("rho must be a number or `plugin`, got `{s}`")))?;
        let mode = RhoMode::Known(v);
        mode.validate()?;
        Ok(mode)
    }
}

impl RhoMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RhoMode::Known(r) if !(r > 0.0 && r <= 1.0) => {
                Err(Error::Argument(format!("rho {r} must lie in (0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

impl Statistic {
    pub fn new(kind: StatKind, rho: RhoMode) -> Statistic {
        Statistic { kind, rho }
    }

    /// The normalizer applied to `g` and to every subgraph derived from it.
    /// Eigenvalues are not normalized and always report 1.
    pub fn resolve_rho(&self, g: &Graph) -> Result<f64> {
        if matches!(self.kind, StatKind::Eigenvalue(_)) {
            return Ok(1.0);
        }
        self.rho.validate()?;
        match self.rho {
            RhoMode::Known(r) => Ok(r),
            RhoMode::PlugIn => plug_in_rho(g),
        }
    }
}

/// Observed edge density `2m / (n (n - 1))`.
pub fn plug_in_rho(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Degenerate("plug-in rho needs at least 2 nodes".into()));
    }
    if g.m() == 0 {
        return Err(Error::UndefinedRho);
    }
    Ok(2.0 * g.m() as f64 / (n as f64 * (n - 1) as f64))
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("rho must be positive, got {rho}")))
    }
}

fn check_size(n: usize, needed: usize, what: &str) -> Result<()> {
    if n < needed {
        Err(Error::Degenerate(format!("{what} needs at least {needed} nodes, graph has {n}")))
    } else {
        Ok(())
    }
}

/// `count / (C(n, p) * iso * rho^e)`.
#[inline]
fn normalize(count: u64, n: usize, p: usize, iso: usize, e: usize, rho: f64) -> f64 {
    count as f64 / (choose_f64(n, p) * iso as f64 * rho.powi(e as i32))
}

fn transitivity_ratio(triangles: u64, two_stars: u64, rho: f64) -> Result<f64> {
    if two_stars == 0 {
        return Err(Error::UndefinedStatistic("transitivity with no two-stars".into()));
    }
    Ok(triangles as f64 / (two_stars as f64 * rho))
}

/// `m / (C(n, 2) rho)`.
pub fn edge_density(g: &Graph, rho: f64) -> Result<f64> {
    check_size(g.n(), 2, "edge density")?;
    check_rho(rho)?;
    Ok(normalize(g.m() as u64, g.n(), 2, 1, 1, rho))
}

/// `T / (C(n, 3) rho^3)`.
pub fn triangle_density(g: &Graph, rho: f64) -> Result<f64> {
    check_size(g.n(), 3, "triangle density")?;
    check_rho(rho)?;
    Ok(normalize(counts::triangle_count(g), g.n(), 3, 1, 3, rho))
}

/// `W / (C(n, 3) rho^2)` with `W = sum_i C(d_i, 2)`.
pub fn two_star_density(g: &Graph, rho: f64) -> Result<f64> {
    check_size(g.n(), 3, "two-star density")?;
    check_rho(rho)?;
    Ok(normalize(counts::two_star_count(g), g.n(), 3, 1, 2, rho))
}

/// Triangle density over two-star density, i.e. `T / (W rho)`.
pub fn normalized_transitivity(g: &Graph, rho: f64) -> Result<f64> {
    check_size(g.n(), 3, "transitivity")?;
    check_rho(rho)?;
    transitivity_ratio(counts::triangle_count(g), counts::two_star_count(g), rho)
}

/// Copies of a pattern with per-node incidence, using closed forms where one
/// exists and connected-subgraph enumeration otherwise.
pub fn pattern_node_counts(g: &Graph, pattern: &Pattern, mode: Match) -> NodeCounts {
    match (pattern.kind(), mode) {
        (PatternKind::Edge, _) | (PatternKind::Path(1), _) | (PatternKind::Star(1), _) => counts::edges_per_node(g),
        (PatternKind::Triangle, _) | (PatternKind::Cycle(3), _) => counts::triangles_per_node(g),
        (PatternKind::TwoStar, Match::Contained)
        | (PatternKind::Path(2), Match::Contained)
        | (PatternKind::Star(2), Match::Contained) => counts::two_stars_per_node(g),
        (PatternKind::Star(k), Match::Contained) => counts::stars_per_node(g, k),
        (PatternKind::Cycle(4), Match::Contained) => counts::four_cycles_per_node(g),
        (PatternKind::TwoStar, Match::Induced)
        | (PatternKind::Path(2), Match::Induced)
        | (PatternKind::Star(2), Match::Induced) => {
            // every triangle holds three two-stars, all through each of its nodes
            let w = counts::two_stars_per_node(g);
            let t = counts::triangles_per_node(g);
            NodeCounts {
                total: w.total - 3 * t.total,
                per_node: w.per_node.iter().zip(&t.per_node).map(|(a, b)| a - 3 * b).collect(),
            }
        }
        _ => esu::pattern_counts(g, pattern, mode),
    }
}

fn pattern_total(g: &Graph, pattern: &Pattern, mode: Match) -> u64 {
    match (pattern.kind(), mode) {
        (PatternKind::Edge, _) | (PatternKind::Path(1), _) | (PatternKind::Star(1), _) => g.m() as u64,
        (PatternKind::Triangle, _) | (PatternKind::Cycle(3), _) => counts::triangle_count(g),
        (PatternKind::TwoStar, Match::Contained)
        | (PatternKind::Path(2), Match::Contained)
        | (PatternKind::Star(2), Match::Contained) => counts::two_star_count(g),
        (PatternKind::TwoStar, Match::Induced)
        | (PatternKind::Path(2), Match::Induced)
        | (PatternKind::Star(2), Match::Induced) => counts::two_star_count(g) - 3 * counts::triangle_count(g),
        _ => pattern_node_counts(g, pattern, mode).total,
    }
}

fn pattern_value(g: &Graph, pattern: &Pattern, rho: f64, mode: Match) -> Result<f64> {
    check_size(g.n(), pattern.p(), "pattern frequency")?;
    check_rho(rho)?;
    let c = pattern_total(g, pattern, mode);
    Ok(normalize(c, g.n(), pattern.p(), pattern.iso_count(), pattern.e(), rho))
}

/// Containment frequency: copies `S` with `S ⊆ G[S]`.
pub fn pattern_count_q(g: &Graph, pattern: &Pattern, rho: f64) -> Result<f64> {
    pattern_value(g, pattern, rho, Match::Contained)
}

/// Exact-match frequency: copies `S` with `S = G[S]`.
pub fn pattern_count_p(g: &Graph, pattern: &Pattern, rho: f64) -> Result<f64> {
    pattern_value(g, pattern, rho, Match::Induced)
}

/// Evaluates any statistic on `g` with normalizer `rho`.
pub fn evaluate(g: &Graph, kind: &StatKind, rho: f64) -> Result<f64> {
    match kind {
        StatKind::EdgeDensity => edge_density(g, rho),
        StatKind::TriangleDensity => triangle_density(g, rho),
        StatKind::TwoStarDensity => two_star_density(g, rho),
        StatKind::Transitivity => normalized_transitivity(g, rho),
        StatKind::PatternP(p) => pattern_count_p(g, p, rho),
        StatKind::PatternQ(p) => pattern_count_q(g, p, rho),
        StatKind::Eigenvalue(k) => {
            check_size(g.n(), *k, "eigenvalue")?;
            let ev = top_eigenvalues(g, *k, eigen::DEFAULT_TOL, eigen::default_max_iter(g.n()))?;
            Ok(ev[*k - 1])
        }
    }
}

fn count_loo(g: &Graph, c: &NodeCounts, p: usize, iso: usize, e: usize, rho: f64) -> LooVector {
    let n = g.n();
    let counts: Vec<u64> = c.per_node.iter().map(|&ti| c.total - ti).collect();
    LooVector {
        values: counts.iter().map(|&k| normalize(k, n - 1, p, iso, e, rho)).collect(),
        full_value: normalize(c.total, n, p, iso, e, rho),
        rho_used: rho,
        counts: Some(LooCounts {
            counts,
            scale: choose_f64(n - 1, p) * iso as f64 * rho.powi(e as i32),
        }),
    }
}

/// Leave-one-node-out values. Counts are updated incrementally from the
/// number of copies through each node; every entry uses `C(n - 1, p)` and
/// the full-graph `rho`. Eigenvalues are recomputed on each subgraph.
pub fn loo_vector(g: &Graph, kind: &StatKind, rho: f64) -> Result<LooVector> {
    let n = g.n();
    let needed = kind.min_nodes().max(1) + 1;
    check_size(n, needed.max(2), "leave-one-out")?;
    if !matches!(kind, StatKind::Eigenvalue(_)) {
        check_rho(rho)?;
    }
    match kind {
        StatKind::EdgeDensity => Ok(count_loo(g, &counts::edges_per_node(g), 2, 1, 1, rho)),
        StatKind::TriangleDensity => Ok(count_loo(g, &counts::triangles_per_node(g), 3, 1, 3, rho)),
        StatKind::TwoStarDensity => Ok(count_loo(g, &counts::two_stars_per_node(g), 3, 1, 2, rho)),
        StatKind::PatternP(pat) | StatKind::PatternQ(pat) => {
            let mode = if matches!(kind, StatKind::PatternP(_)) { Match::Induced } else { Match::Contained };
            let c = pattern_node_counts(g, pat, mode);
            Ok(count_loo(g, &c, pat.p(), pat.iso_count(), pat.e(), rho))
        }
        StatKind::Transitivity => {
            let t = counts::triangles_per_node(g);
            let w = counts::two_stars_per_node(g);
            let values = t
                .per_node
                .iter()
                .zip(&w.per_node)
                .enumerate()
                .map(|(i, (&ti, &wi))| {
                    transitivity_ratio(t.total - ti, w.total - wi, rho).map_err(|_| {
                        Error::UndefinedStatistic(format!("transitivity undefined without node {i}"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(LooVector {
                values,
                full_value: transitivity_ratio(t.total, w.total, rho)?,
                rho_used: rho,
                counts: None,
            })
        }
        StatKind::Eigenvalue(k) => {
            let k = *k;
            let values = par::try_map_range(n, |i| {
                let h = induced_subgraph(g, &leave_one_out(g, i)?)?;
                let ev = top_eigenvalues(&h, k, eigen::DEFAULT_TOL, eigen::default_max_iter(h.n()))?;
                Ok::<f64, Error>(ev[k - 1])
            })?;
            let full = top_eigenvalues(g, k, eigen::DEFAULT_TOL, eigen::default_max_iter(n))?;
            Ok(LooVector {
                values,
                full_value: full[k - 1],
                rho_used: 1.0,
                counts: None,
            })
        }
    }
}
