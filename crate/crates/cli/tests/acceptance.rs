//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use netjack_core::experiment::{parse_config, run_ratio_experiment, run_timing_benchmark, Method, RatioReport};
use netjack_core::functionals::oracle::brute_force_loo;
use netjack_core::functionals::{loo_vector, pattern_count_p, pattern_count_q, top_eigenvalues};
use netjack_core::resampling::{efron_stein_check, jackknife, jackknife_alternative};
use netjack_core::sim::{absdiff_model, constant_model, cube_root_absdiff, three_block_sbm, replicate_seed, sample_graph};
use netjack_core::{Graph, GraphonModel, Pattern, PatternKind, RhoMode, StatKind, Statistic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

/// Small graph from a model chosen by `seed % 3`, with `n` drawn from `range`.
fn mixed_graph(seed: u64, range: std::ops::RangeInclusive<usize>) -> (Graph, f64, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(range);
    let (model, label): (GraphonModel, String) = match seed % 3 {
        0 => {
            let p = rng.gen_range(0.1..0.6);
            (constant_model(p, 1.0).unwrap(), format!("er({p:.2})"))
        }
        1 => (three_block_sbm(), "sbm".into()),
        _ => (absdiff_model(-0.25).unwrap(), "absdiff(-1/4)".into()),
    };
    let s = sample_graph(&model, n, seed).unwrap();
    (s.graph, s.rho, format!("{label} n={n} seed={seed}"))
}

fn pattern(kind: PatternKind) -> Pattern {
    Pattern::new(kind).unwrap()
}

fn four_patterns() -> Vec<Pattern> {
    [PatternKind::Edge, PatternKind::TwoStar, PatternKind::Triangle, PatternKind::Cycle(4)]
        .into_iter()
        .map(pattern)
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let (g, rho, label) = mixed_graph(seed, 10..=60);
        let mut kinds = vec![StatKind::EdgeDensity, StatKind::TriangleDensity, StatKind::TwoStarDensity];
        for p in four_patterns() {
            kinds.push(StatKind::PatternQ(p.clone()));
            kinds.push(StatKind::PatternP(p));
        }
        for kind in &kinds {
            let loo = loo_vector(&g, kind, rho).map_err(|e| format!("{label} {kind}: {e}"))?;
            let (mean, full) = (loo.mean(), loo.full_value);
            let rel = if full == 0.0 { mean.abs() } else { ((mean - full) / full).abs() };
            worst = worst.max(rel);
            ensure(rel <= 1e-12, || format!("{label} {kind}: mean {mean} vs full {full}"))?;
        }
    }
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("worst relative gap {worst:.1e} in {:.1?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut kinds = vec![
        StatKind::EdgeDensity,
        StatKind::TriangleDensity,
        StatKind::TwoStarDensity,
        StatKind::Transitivity,
    ];
    for p in four_patterns() {
        kinds.push(StatKind::PatternQ(p.clone()));
        kinds.push(StatKind::PatternP(p));
    }
    let mut compared = 0;
    for seed in 0..50 {
        let (g, rho, label) = mixed_graph(1000 + seed, 10..=60);
        for kind in &kinds {
            let fast = loo_vector(&g, kind, rho);
            let slow = brute_force_loo(&g, kind, rho);
            match (fast, slow) {
                (Ok(f), Ok(s)) => {
                    ensure(f.values == s.values && f.full_value == s.full_value, || format!("{label} {kind}: values differ"))?;
                    compared += 1;
                }
                // both sides must agree that the statistic is undefined
                (Err(a), Err(b)) => ensure(a.class() == b.class(), || format!("{label} {kind}: {a} vs {b}"))?,
                (f, s) => return Err(format!("{label} {kind}: incremental {:?} vs recount {:?}", f.err(), s.err())),
            }
        }
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{compared} vectors identical in {:.1?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let s = Statistic::new(StatKind::EdgeDensity, RhoMode::Known(1.0));
    let path = jackknife(&Graph::path(3), &s).map_err(|e| e.to_string())?.var_hat;
    ensure(path == 2.0 / 3.0, || format!("path var_hat {path:e}, want 2/3"))?;
    let t = Statistic::new(StatKind::TriangleDensity, RhoMode::Known(1.0));
    let k4 = jackknife(&Graph::complete(4), &t).map_err(|e| e.to_string())?.var_hat;
    ensure(k4 == 0.0, || format!("K4 var_hat {k4:e}, want 0"))?;
    Ok("path 2/3, K4 0".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let n = 100;
    let mut cells = Vec::new();
    for (mi, (name, model)) in [("sbm", three_block_sbm()), ("gr2", cube_root_absdiff())].into_iter().enumerate() {
        for (si, kind) in [StatKind::EdgeDensity, StatKind::TriangleDensity, StatKind::TwoStarDensity]
            .into_iter()
            .enumerate()
        {
            let stat = Statistic::new(kind.clone(), RhoMode::Known(model.rho(n)));
            let seed = replicate_seed(4, (10 * mi + si) as u64);
            let c = efron_stein_check(&model, n, &stat, 200, seed).map_err(|e| e.to_string())?;
            cells.push(format!("{name}/{kind} {:.3}", c.mean_jk / c.emp_var));
            ensure(c.conservative, || {
                format!(
                    "{name} {kind}: mean jackknife {:.4e} < empirical {:.4e} - 2 x {:.2e}",
                    c.mean_jk, c.emp_var, c.mcse
                )
            })?;
        }
    }
    within_budget(start, Duration::from_secs(300))?;
    Ok(format!("jk/emp: {} in {:.1?}", cells.join(", "), start.elapsed()))
}

fn ratio(report: &RatioReport, n: usize, stat: &str, method: &str, b: Option<f64>) -> Result<(f64, f64), String> {
    let row = report.find(n, stat, method, b).ok_or_else(|| format!("missing row n={n} {stat} {method}"))?;
    match (row.mean_ratio, row.se_ratio) {
        (Some(m), Some(se)) => Ok((m, se)),
        _ => Err(format!("undefined ratio at n={n} {stat} {method}")),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = parse_config(
        r#"{"model": "sbm3", "n_list": [100, 500, 1000], "reps": 100, "master_seed": 5,
            "statistics": ["edge-density", "triangle-density"], "methods": ["jackknife"]}"#,
    )
    .map_err(|e| e.to_string())?;
    let report = run_ratio_experiment(&cfg).map_err(|e| e.to_string())?;
    let (edge, _) = ratio(&report, 500, "edge-density", "jackknife", None)?;
    let (tri, _) = ratio(&report, 500, "triangle-density", "jackknife", None)?;
    let path: Vec<(f64, f64)> = [100, 500, 1000]
        .into_iter()
        .map(|n| ratio(&report, n, "edge-density", "jackknife", None))
        .collect::<Result<_, _>>()?;
    let summary = format!(
        "edge n=500 {edge:.3}, triangle n=500 {tri:.3}, edge over n: {}",
        path.iter().map(|(m, se)| format!("{m:.3}+-{se:.3}")).collect::<Vec<_>>().join(" ")
    );
    ensure((0.85..=1.15).contains(&edge), || format!("edge ratio out of [0.85, 1.15]; {summary}"))?;
    ensure((0.80..=1.25).contains(&tri), || format!("triangle ratio out of [0.80, 1.25]; {summary}"))?;
    for w in path.windows(2) {
        let ((m0, se0), (m1, se1)) = (w[0], w[1]);
        // allowance: one standard error, the larger of the two cells
        ensure((m1 - 1.0).abs() <= (m0 - 1.0).abs() + se0.max(se1), || {
            format!("|ratio - 1| increased; {summary}")
        })?;
    }
    within_budget(start, Duration::from_secs(600))?;
    Ok(format!("{summary} in {:.1?}", start.elapsed()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = parse_config(
        r#"{"model": "sbm3", "n_list": [500], "reps": 100, "master_seed": 6,
            "statistics": ["triangle-density"],
            "methods": [{"subsample": {"b_frac": 0.05, "B": 1000}}, {"subsample": {"b_frac": 0.2, "B": 1000}}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let report = run_ratio_experiment(&cfg).map_err(|e| e.to_string())?;
    let (small, _) = ratio(&report, 500, "triangle-density", "subsample", Some(0.05))?;
    let (large, _) = ratio(&report, 500, "triangle-density", "subsample", Some(0.2))?;
    ensure(small > large, || format!("b=0.05n ratio {small:.3} <= b=0.2n ratio {large:.3}"))?;
    Ok(format!("b=0.05n {small:.3} > b=0.2n {large:.3} in {:.1?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let ev = top_eigenvalues(&Graph::complete(10), 2, 1e-10, 100).map_err(|e| e.to_string())?;
    ensure((ev[0] - 9.0).abs() < 1e-8 && (ev[1] + 1.0).abs() < 1e-8, || format!("K10: {ev:?}"))?;
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let (g, _, label) = mixed_graph(7000 + seed, 5..=60);
        let n = g.n();
        let dense = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
        let mut oracle: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        oracle.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap().then(b.partial_cmp(a).unwrap()));
        let k = 3.min(n);
        let ev = top_eigenvalues(&g, k, 1e-10, 10 * n).map_err(|e| format!("{label}: {e}"))?;
        for (i, v) in ev.iter().enumerate() {
            let gap = (v - oracle[i]).abs();
            worst = worst.max(gap);
            ensure(gap < 1e-6, || format!("{label} eigenvalue {i}: {v} vs dense {}", oracle[i]))?;
        }
    }
    Ok(format!("K10 (9, -1); worst dense gap {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let g = sample_graph(&three_block_sbm(), 2000, 8).map_err(|e| e.to_string())?.graph;
    let stat = Statistic::new(StatKind::TriangleDensity, RhoMode::PlugIn);
    let methods = [Method::Jackknife, Method::subsample(0.2, 1000).map_err(|e| e.to_string())?];
    let rows = run_timing_benchmark(&g, &stat, &methods, 8).map_err(|e| e.to_string())?;
    let (jk, sub) = (rows[0].wall_time, rows[1].wall_time);
    let summary = format!("jackknife {jk:.3}s, subsample(b=0.2n, B=1000) {sub:.3}s");
    ensure(jk <= sub, || format!("jackknife slower; {summary}"))?;
    ensure(jk < 10.0, || format!("jackknife over 10 s; {summary}"))?;
    Ok(summary)
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"model": "sbm3", "n_list": [60, 120], "reps": 12, "master_seed": 99,
            "statistics": ["edge-density", "triangle-density", "transitivity", "eigenvalue:1"],
            "methods": ["jackknife", "jackknife-alt", {"subsample": {"b_frac": 0.2, "B": 50}}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("threads{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_netjack"))
            .args(["experiment", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("NETJACK_THREADS", threads)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("exit status {status} with {threads} threads"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "CSV differs between 1 and 4 threads".into())?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn criterion_10() -> Outcome {
    let kinds = [
        PatternKind::Edge,
        PatternKind::TwoStar,
        PatternKind::Triangle,
        PatternKind::Cycle(4),
        PatternKind::Path(3),
        PatternKind::Star(3),
        PatternKind::Path(4),
        PatternKind::Cycle(5),
    ];
    for combo in 0..200u64 {
        let (g, rho, label) = mixed_graph(10_000 + combo, 6..=40);
        let pat = pattern(kinds[combo as usize % kinds.len()]);
        let p = pattern_count_p(&g, &pat, rho).map_err(|e| e.to_string())?;
        let q = pattern_count_q(&g, &pat, rho).map_err(|e| e.to_string())?;
        ensure(p <= q + 1e-12 * q.abs().max(1.0), || format!("{label} {pat}: P {p} > Q {q}"))?;
        let kind = if combo % 2 == 0 { StatKind::PatternQ(pat.clone()) } else { StatKind::PatternP(pat.clone()) };
        let stat = Statistic::new(kind, RhoMode::Known(rho));
        let std = jackknife(&g, &stat).map_err(|e| e.to_string())?.var_hat;
        let alt = jackknife_alternative(&g, &stat).map_err(|e| e.to_string())?.var_hat;
        ensure(alt >= std - 1e-12 * alt.abs().max(1.0), || format!("{label} {pat}: alt {alt} < standard {std}"))?;
    }
    Ok("200 combinations".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("leave-one-out mean equals full count density", criterion_1),
        ("incremental leave-one-out equals recount", criterion_2),
        ("hand-derived jackknife values", criterion_3),
        ("jackknife is conservative at n = 100", criterion_4),
        ("jackknife ratio converges to 1", criterion_5),
        ("small subsamples overestimate", criterion_6),
        ("eigenvalues match dense decomposition", criterion_7),
        ("jackknife no slower than subsampling at n = 2000", criterion_8),
        ("experiment CSV independent of thread count", criterion_9),
        ("exact match <= containment, alternative >= standard", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
