//! Monte Carlo ratio experiments and timing comparisons.
//!
//! For every graph size the harness simulates `reps` graphs, evaluates each
//! statistic, and takes the cross-replicate sample variance as the "true"
//! variance. Every method then estimates the variance from each single
//! graph; the report holds the mean and standard error of
//! `estimate / true variance` per (size, statistic, method).

mod config;
mod report;

use std::time::Instant;

pub use config::{
    parse_config, ExperimentConfig, Method, ModelSpec, RhoChoice, DEFAULT_B_FRACS, DEFAULT_REPS,
    DEFAULT_SUBSAMPLE_REPLICATES,
};
pub use report::{emit_report, fmt_float, fmt_opt, write_ratio_csv, write_ratio_svg, write_table, ReportFormat, NA, RATIO_HEADER};

use crate::error::{Error, Result};
use crate::functionals::{evaluate, RhoMode, StatKind, Statistic};
use crate::graph::Graph;
use crate::par;
use crate::resampling::{jackknife, jackknife_alternative, subsample_size, subsample_variance};
use crate::sim::{replicate_seed, sample_graph};

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub n: usize,
    pub stat: String,
    pub method: String,
    pub b_frac: Option<f64>,
    /// `None` when the true variance is zero or no replicate was usable.
    pub mean_ratio: Option<f64>,
    pub se_ratio: Option<f64>,
    pub reps_used: usize,
    pub true_var: Option<f64>,
    pub mean_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn find(&self, n: usize, stat: &str, method: &str, b_frac: Option<f64>) -> Option<&RatioRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.stat == stat && r.method == method && r.b_frac == b_frac)
    }
}

/// Failures that make a statistic undefined on a particular graph rather
/// than aborting the run.
fn is_undefined(e: &Error) -> bool {
    matches!(e, Error::UndefinedStatistic(_) | Error::UndefinedRho | Error::Degenerate(_))
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_undefined(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Variance estimate of `method` on `g`; `seed` drives subsampling.
pub fn estimate_variance(g: &Graph, stat: &Statistic, method: &Method, seed: u64) -> Result<f64> {
    match method {
        Method::Jackknife => jackknife(g, stat).map(|e| e.var_hat),
        Method::JackknifeAlt => jackknife_alternative(g, stat).map(|e| e.var_hat),
        Method::Subsample { b_frac, replicates } => {
            let b = subsample_size(g.n(), *b_frac);
            subsample_variance(g, stat, b, *replicates, seed).map(|e| e.var_hat)
        }
    }
}

/// Per replicate: for each statistic, its value and each method's estimate.
type ReplicateResult = Vec<(Option<f64>, Vec<Option<f64>>)>;

fn mean_and_sample_var(x: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let mean = x.iter().sum::<f64>() / k;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
    (mean, var)
}

pub fn run_ratio_experiment(cfg: &ExperimentConfig) -> Result<RatioReport> {
    if cfg.reps < 2 {
        return Err(Error::config("reps", format!("{} < 2", cfg.reps)));
    }
    if cfg.n_list.is_empty() {
        return Err(Error::config("n_list", "must not be empty"));
    }
    let model = cfg.model.build()?;
    let mut report = RatioReport::default();

    for &n in &cfg.n_list {
        let rho_mode = match cfg.rho {
            RhoChoice::Model => RhoMode::Known(model.rho(n)),
            RhoChoice::PlugIn => RhoMode::PlugIn,
        };
        let stats: Vec<Statistic> = cfg
            .statistics
            .iter()
            .map(|k| Statistic::new(k.clone(), rho_mode))
            .collect();
        let cell_seed = replicate_seed(cfg.master_seed, n as u64);

        let replicates: Vec<ReplicateResult> = par::try_map_range(cfg.reps, |r| {
            let seed = replicate_seed(cell_seed, r as u64);
            let g = sample_graph(&model, n, seed)?.graph;
            stats
                .iter()
                .map(|stat| {
                    let value = match stat.resolve_rho(&g) {
                        Ok(rho) => defined(evaluate(&g, &stat.kind, rho))?,
                        Err(e) if is_undefined(&e) => None,
                        Err(e) => return Err(e),
                    };
                    let estimates = cfg
                        .methods
                        .iter()
                        .enumerate()
                        .map(|(mi, m)| defined(estimate_variance(&g, stat, m, replicate_seed(seed, mi as u64 + 1))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((value, estimates))
                })
                .collect::<Result<ReplicateResult>>()
        })?;

        for (si, stat) in stats.iter().enumerate() {
            let values: Vec<f64> = replicates.iter().filter_map(|rep| rep[si].0).collect();
            let true_var = (values.len() >= 2).then(|| mean_and_sample_var(&values).1);
            for (mi, method) in cfg.methods.iter().enumerate() {
                let estimates: Vec<f64> = replicates
                    .iter()
                    .filter(|rep| rep[si].0.is_some())
                    .filter_map(|rep| rep[si].1[mi])
                    .collect();
                let reps_used = estimates.len();
                let mean_estimate = (reps_used > 0).then(|| estimates.iter().sum::<f64>() / reps_used as f64);
                let (mean_ratio, se_ratio) = match true_var {
                    Some(tv) if tv > 0.0 && reps_used > 0 => {
                        let ratios: Vec<f64> = estimates.iter().map(|e| e / tv).collect();
                        if reps_used >= 2 {
                            let (m, v) = mean_and_sample_var(&ratios);
                            (Some(m), Some((v / reps_used as f64).sqrt()))
                        } else {
                            (Some(ratios[0]), None)
                        }
                    }
                    _ => (None, None),
                };
                report.rows.push(RatioRow {
                    n,
                    stat: stat.kind.name(),
                    method: method.label().to_string(),
                    b_frac: method.b_frac(),
                    mean_ratio,
                    se_ratio,
                    reps_used,
                    true_var,
                    mean_estimate,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub method: String,
    pub b_frac: Option<f64>,
    /// Seconds for one run after a warm-up run.
    pub wall_time: f64,
    pub var_hat: f64,
}

/// Times each method on `g` with a single worker thread. Each method runs
/// once untimed before the timed run.
pub fn run_timing_benchmark(g: &Graph, stat: &Statistic, methods: &[Method], seed: u64) -> Result<Vec<TimingRow>> {
    if methods.is_empty() {
        return Err(Error::Argument("no methods to time".into()));
    }
    par::with_threads(Some(1), || {
        methods
            .iter()
            .map(|m| {
                estimate_variance(g, stat, m, seed)?;
                let start = Instant::now();
                let var_hat = estimate_variance(g, stat, m, seed)?;
                Ok(TimingRow {
                    method: m.label().to_string(),
                    b_frac: m.b_frac(),
                    wall_time: start.elapsed().as_secs_f64(),
                    var_hat,
                })
            })
            .collect()
    })
}

/// Convenience: statistics named in a config with the given normalizer.
pub fn statistics_with(kinds: &[StatKind], rho: RhoMode) -> Vec<Statistic> {
    kinds.iter().map(|k| Statistic::new(k.clone(), rho)).collect()
}
