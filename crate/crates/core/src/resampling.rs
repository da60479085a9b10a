//! Variance estimators: the leave-one-node-out jackknife, its variant
//! centered at the full-graph value, and node subsampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functionals::{evaluate, loo_vector, LooVector, Statistic};
use crate::graph::{induced_subgraph, Graph, NodeSubset};
use crate::par;
use crate::sim::{replicate_seed, sample_graph, GraphonModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JackknifeKind {
    /// `sum_i (Z_i - mean Z)^2`.
    Standard,
    /// `sum_i (Z_n - Z_i)^2`, centered at the full-graph value.
    Alternative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JackknifeEstimate {
    pub loo: LooVector,
    /// Raw sum of squared deviations, no `(n - 1) / n` factor.
    pub var_hat: f64,
    /// `n * var_hat`.
    pub scaled_var: f64,
    pub stat: Statistic,
    pub n: usize,
    pub kind: JackknifeKind,
}

impl JackknifeEstimate {
    /// The statistic on the full graph.
    pub fn center(&self) -> f64 {
        self.loo.full_value
    }
}

fn sum_sq_about(values: &[f64], center: f64) -> f64 {
    values.iter().map(|z| (z - center) * (z - center)).sum()
}

fn jackknife_with(g: &Graph, stat: &Statistic, kind: JackknifeKind) -> Result<JackknifeEstimate> {
    let rho = stat.resolve_rho(g)?;
    let loo = loo_vector(g, &stat.kind, rho)?;
    let var_hat = match kind {
        JackknifeKind::Standard => loo
            .counts
            .as_ref()
            .and_then(|c| c.sum_sq_deviation())
            .unwrap_or_else(|| sum_sq_about(&loo.values, loo.mean())),
        JackknifeKind::Alternative => sum_sq_about(&loo.values, loo.full_value),
    };
    Ok(JackknifeEstimate {
        var_hat,
        scaled_var: g.n() as f64 * var_hat,
        stat: stat.clone(),
        n: g.n(),
        kind,
        loo,
    })
}

/// Network jackknife variance `sum_i (Z_{n,i} - Zbar_n)^2`.
pub fn jackknife(g: &Graph, stat: &Statistic) -> Result<JackknifeEstimate> {
    jackknife_with(g, stat, JackknifeKind::Standard)
}

/// `sum_i (Z_n - Z_{n,i})^2`. Never smaller than [`jackknife`]; often loose.
pub fn jackknife_alternative(g: &Graph, stat: &Statistic) -> Result<JackknifeEstimate> {
    jackknife_with(g, stat, JackknifeKind::Alternative)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleEstimate {
    /// Subsample size.
    pub b: usize,
    /// Replicates requested.
    pub replicates: usize,
    /// Statistic on each replicate that was defined, in replicate order.
    pub replicate_values: Vec<f64>,
    /// Replicates where the statistic was undefined.
    pub dropped: usize,
    /// `(b / n) * mean squared deviation` of the replicate values.
    pub var_hat: f64,
    pub rho_used: f64,
    pub seed: u64,
    pub n: usize,
}

/// Largest fraction of undefined replicates tolerated.
pub const MAX_DROPPED_FRACTION: f64 = 0.1;

/// Subsampling variance: `replicates` uniform node subsets of size `b`
/// without replacement, the statistic on each induced subgraph (with the
/// full-graph normalizer), and the spread rescaled by `b / n`.
pub fn subsample_variance(g: &Graph, stat: &Statistic, b: usize, replicates: usize, seed: u64) -> Result<SubsampleEstimate> {
    let n = g.n();
    let p = stat.kind.min_nodes();
    if b <= p {
        return Err(Error::Degenerate(format!("subsample size {b} must exceed pattern size {p}")));
    }
    if b > n {
        return Err(Error::Argument(format!("subsample size {b} exceeds graph size {n}")));
    }
    if replicates < 2 {
        return Err(Error::Argument("at least 2 subsample replicates are needed".into()));
    }
    let rho = stat.resolve_rho(g)?;

    let outcomes: Vec<Result<f64>> = par::map_range(replicates, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(seed, r as u64));
        let kept = rand::seq::index::sample(&mut rng, n, b).into_vec();
        let h = induced_subgraph(g, &NodeSubset::new(n, kept)?)?;
        evaluate(&h, &stat.kind, rho)
    });
    let mut values = Vec::with_capacity(replicates);
    let mut dropped = 0;
    for o in outcomes {
        match o {
            Ok(v) => values.push(v),
            Err(Error::UndefinedStatistic(_)) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    if dropped as f64 > MAX_DROPPED_FRACTION * replicates as f64 {
        return Err(Error::UndefinedStatistic(format!(
            "statistic undefined on {dropped} of {replicates} subsamples"
        )));
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var_hat = (b as f64 / n as f64) * sum_sq_about(&values, mean) / k;
    Ok(SubsampleEstimate {
        b,
        replicates,
        replicate_values: values,
        dropped,
        var_hat,
        rho_used: rho,
        seed,
        n,
    })
}

/// Subsample size `round(frac * n)`.
pub fn subsample_size(n: usize, frac: f64) -> usize {
    (frac * n as f64).round() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfronSteinCheck {
    /// Mean jackknife variance over replicates (graphs of size `n`).
    pub mean_jk: f64,
    /// Sample variance of the statistic on the `n - 1` node subgraphs.
    pub emp_var: f64,
    /// Standard error of `mean_jk`.
    pub mcse: f64,
    /// `mean_jk >= emp_var - 2 mcse`.
    pub conservative: bool,
}

/// Monte Carlo check that the jackknife at size `n` is conservative for the
/// variance of the statistic at size `n - 1`.
///
/// Each replicate samples a graph, computes its jackknife variance, and
/// evaluates the statistic on the subgraph without the last node, all with
/// the same normalizer. A `Known` rho is used as given; `PlugIn` is resolved
/// per replicate graph.
pub fn efron_stein_check(model: &GraphonModel, n: usize, stat: &Statistic, reps: usize, master_seed: u64) -> Result<EfronSteinCheck> {
    if reps < 30 {
        return Err(Error::Argument(format!("need at least 30 replicates, got {reps}")));
    }
    let rows = par::try_map_range(reps, |r| {
        let s = sample_graph(model, n, replicate_seed(master_seed, r as u64))?;
        let g = &s.graph;
        let jk = jackknife(g, stat)?;
        let rho = jk.loo.rho_used;
        let smaller = induced_subgraph(g, &crate::graph::leave_one_out(g, n - 1)?)?;
        let z = evaluate(&smaller, &stat.kind, rho)?;
        Ok::<(f64, f64), Error>((jk.var_hat, z))
    })?;
    let (jks, zs): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let r = reps as f64;
    let mean_jk = jks.iter().sum::<f64>() / r;
    let jk_var = sum_sq_about(&jks, mean_jk) / (r - 1.0);
    let mcse = (jk_var / r).sqrt();
    let z_mean = zs.iter().sum::<f64>() / r;
    let emp_var = sum_sq_about(&zs, z_mean) / (r - 1.0);
    Ok(EfronSteinCheck {
        mean_jk,
        emp_var,
        mcse,
        conservative: mean_jk >= emp_var - 2.0 * mcse,
    })
}
