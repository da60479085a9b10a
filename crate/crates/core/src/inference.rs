//! Confidence intervals from jackknife variances and CI-overlap comparison
//! of two networks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::functionals::Statistic;
use crate::graph::{induced_subgraph, Graph, NodeSubset};
use crate::par;
use crate::resampling::jackknife;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalMethod {
    /// `center ± z_{(1+level)/2} sqrt(var)`.
    #[default]
    Normal,
    /// `center ± sqrt(var / (1 - level))`, valid without normality.
    Chebyshev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub center: f64,
    pub half_width: f64,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

pub fn interval(center: f64, var_hat: f64, level: f64, method: IntervalMethod) -> Result<ConfidenceInterval> {
    if !(var_hat >= 0.0) {
        return Err(Error::Argument(format!("variance {var_hat} must be nonnegative")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Argument(format!("level {level} must lie in (0, 1)")));
    }
    let half_width = match method {
        IntervalMethod::Normal => normal_quantile((1.0 + level) / 2.0) * var_hat.sqrt(),
        IntervalMethod::Chebyshev => (var_hat / (1.0 - level)).sqrt(),
    };
    Ok(ConfidenceInterval {
        center,
        half_width,
        level,
        lower: center - half_width,
        upper: center + half_width,
    })
}

/// Normal-approximation interval.
pub fn normal_ci(center: f64, var_hat: f64, level: f64) -> Result<ConfidenceInterval> {
    interval(center, var_hat, level, IntervalMethod::Normal)
}

#[derive(Debug, Clone)]
pub struct Split {
    pub train: Graph,
    pub test: Graph,
    /// Original ids of the training nodes, increasing.
    pub train_nodes: Vec<usize>,
    pub test_nodes: Vec<usize>,
}

/// Random halving of the node set: `ceil(n/2)` training nodes and
/// `floor(n/2)` test nodes. Edges across the cut are discarded.
pub fn split_train_test(g: &Graph, seed: u64) -> Result<Split> {
    let n = g.n();
    if n < 4 {
        return Err(Error::Degenerate(format!("split needs at least 4 nodes, graph has {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (a, b) = order.split_at(n.div_ceil(2));
    let train = NodeSubset::new(n, a.to_vec())?;
    let test = NodeSubset::new(n, b.to_vec())?;
    Ok(Split {
        train: induced_subgraph(g, &train)?,
        test: induced_subgraph(g, &test)?,
        train_nodes: train.kept().to_vec(),
        test_nodes: test.kept().to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonVerdict {
    pub ci_a: ConfidenceInterval,
    pub ci_b: ConfidenceInterval,
    pub var_a: f64,
    pub var_b: f64,
    pub disjoint: bool,
    /// Level of the implied test: `2 (1 - level)`.
    pub implied_test_level: f64,
}

pub fn verdict(ci_a: ConfidenceInterval, ci_b: ConfidenceInterval, var_a: f64, var_b: f64) -> ComparisonVerdict {
    ComparisonVerdict {
        ci_a,
        ci_b,
        var_a,
        var_b,
        disjoint: ci_a.upper < ci_b.lower || ci_b.upper < ci_a.lower,
        implied_test_level: 2.0 * (1.0 - ci_a.level),
    }
}

/// Builds a jackknife interval for each graph (each with its own normalizer
/// when `stat` uses the plug-in rho) and reports whether they are disjoint.
pub fn two_sample_compare(g1: &Graph, g2: &Graph, stat: &Statistic, level: f64, method: IntervalMethod) -> Result<ComparisonVerdict> {
    let (a, b) = par::join(|| jackknife(g1, stat), || jackknife(g2, stat));
    let (a, b) = (a?, b?);
    let ci_a = interval(a.center(), a.var_hat, level, method)?;
    let ci_b = interval(b.center(), b.var_hat, level, method)?;
    Ok(verdict(ci_a, ci_b, a.var_hat, b.var_hat))
}
