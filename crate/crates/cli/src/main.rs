//! `netjack`: network jackknife variance estimation from the command line.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netjack_core::experiment::{
    emit_report, fmt_float, parse_config, run_ratio_experiment, run_timing_benchmark, write_ratio_csv, write_table,
    Method, ModelSpec, ReportFormat, DEFAULT_SUBSAMPLE_REPLICATES, NA,
};
use netjack_core::graph::{load_edge_list, write_edge_list, EdgeListOptions};
use netjack_core::inference::{interval, split_train_test, two_sample_compare, ComparisonVerdict, IntervalMethod};
use netjack_core::resampling::{jackknife, jackknife_alternative, subsample_size, subsample_variance};
use netjack_core::sim::sample_graph;
use netjack_core::{par, Error, ErrorClass, Graph, Result, RhoMode, StatKind, Statistic};

const THREADS_VAR: &str = "NETJACK_THREADS";

#[derive(Parser)]
#[command(name = "netjack", version, about = "Leave-node-out network jackknife")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph from a graphon model and write it as an edge list.
    Simulate {
        /// `sbm3`, `gr2`, `absdiff:<exponent>`, `er:<p>` or a JSON object.
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jackknife variance of a statistic on one graph.
    Jackknife {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        stat: StatArgs,
        /// Center at the full-graph value instead of the leave-one-out mean.
        #[arg(long)]
        alt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node-subsampling variance of a statistic on one graph.
    Subsample {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        stat: StatArgs,
        /// Subsample size as a fraction of n.
        #[arg(long)]
        b_frac: f64,
        /// Number of subsamples.
        #[arg(long = "B", default_value_t = DEFAULT_SUBSAMPLE_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Confidence interval from the jackknife variance.
    Ci {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        stat: StatArgs,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split the nodes at random into two halves and write both induced graphs.
    Split {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_train: PathBuf,
        #[arg(long)]
        out_test: PathBuf,
    },
    /// Compare two networks through the overlap of their intervals.
    Compare {
        #[arg(long)]
        graph_a: PathBuf,
        #[arg(long)]
        graph_b: PathBuf,
        #[arg(long)]
        one_indexed: bool,
        #[command(flatten)]
        stat: StatArgs,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo ratio experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides `output_path` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG plot of the ratios.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Time the jackknife against subsampling on one graph, single-threaded.
    Bench {
        /// Edge-list file; a graph is sampled from `--model` when omitted.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        one_indexed: bool,
        #[arg(long, default_value = "sbm3")]
        model: String,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value = "triangle-density")]
        stat: String,
        #[arg(long, default_value = "plugin")]
        rho: String,
        /// Subsample fractions to time.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2])]
        b_frac: Vec<f64>,
        #[arg(long = "B", default_value_t = DEFAULT_SUBSAMPLE_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file: two ids per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Ids in the file start at 1.
    #[arg(long)]
    one_indexed: bool,
    /// Node count override, for isolated nodes missing from the file.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct StatArgs {
    /// edge-density, triangle-density, twostar-density, transitivity,
    /// pattern-p:NAME, pattern-q:NAME or eigenvalue:K.
    #[arg(long)]
    stat: String,
    /// Sparsity normalizer: a value in (0, 1] or `plugin`.
    #[arg(long, default_value = "plugin")]
    rho: String,
}

impl StatArgs {
    fn statistic(&self) -> Result<Statistic> {
        statistic(&self.stat, &self.rho)
    }
}

#[derive(Args)]
struct LevelArgs {
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Chebyshev half-width `sqrt(var / (1 - level))` instead of normal.
    #[arg(long)]
    chebyshev: bool,
}

impl LevelArgs {
    fn method(&self) -> IntervalMethod {
        if self.chebyshev {
            IntervalMethod::Chebyshev
        } else {
            IntervalMethod::Normal
        }
    }
}

fn statistic(stat: &str, rho: &str) -> Result<Statistic> {
    let kind: StatKind = stat.parse().map_err(as_usage)?;
    let rho: RhoMode = rho.parse().map_err(as_usage)?;
    Ok(Statistic::new(kind, rho))
}

/// Bad names on the command line are usage errors whatever the parser says.
fn as_usage(e: Error) -> Error {
    match e {
        Error::Argument(_) | Error::Config { .. } => e,
        other => Error::Argument(other.to_string()),
    }
}

fn load(path: &Path, one_indexed: bool, nodes: Option<usize>) -> Result<Graph> {
    let file = File::open(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let loaded = load_edge_list(BufReader::new(file), EdgeListOptions { one_indexed, nodes })?;
    if loaded.dropped > 0 {
        eprintln!("{}: dropped {} duplicate or self-loop lines", path.display(), loaded.dropped);
    }
    Ok(loaded.graph)
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        load(&self.graph, self.one_indexed, self.nodes)
    }
}

/// Runs `f` on a buffered writer for `path`, or standard output.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

const ESTIMATE_HEADER: [&str; 8] = ["method", "stat", "n", "rho", "b", "B", "var_hat", "scaled_var"];
const CI_HEADER: [&str; 7] = ["graph", "stat", "center", "var_hat", "lower", "upper", "level"];

fn ci_record(graph: &Path, stat: &Statistic, center: f64, var_hat: f64, lower: f64, upper: f64, level: f64) -> Vec<String> {
    vec![
        graph.display().to_string(),
        stat.kind.name(),
        fmt_float(center),
        fmt_float(var_hat),
        fmt_float(lower),
        fmt_float(upper),
        level.to_string(),
    ]
}

fn compare_rows(a: &Path, b: &Path, stat: &Statistic, v: &ComparisonVerdict) -> Vec<Vec<String>> {
    [(a, &v.ci_a, v.var_a), (b, &v.ci_b, v.var_b)]
        .into_iter()
        .map(|(path, ci, var)| {
            let mut row = ci_record(path, stat, ci.center, var, ci.lower, ci.upper, ci.level);
            row.push(v.disjoint.to_string());
            row.push(fmt_float(v.implied_test_level));
            row
        })
        .collect()
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { model, n, seed, out } => {
            let model = ModelSpec::parse(&model)?.build()?;
            let sampled = sample_graph(&model, n, seed)?;
            with_output(out.as_deref(), |w| write_edge_list(&sampled.graph, w))
        }
        Command::Jackknife { input, stat, alt, out } => {
            let g = input.load()?;
            let stat = stat.statistic()?;
            let est = if alt { jackknife_alternative(&g, &stat)? } else { jackknife(&g, &stat)? };
            let row = vec![
                if alt { "jackknife-alt" } else { "jackknife" }.to_string(),
                stat.kind.name(),
                g.n().to_string(),
                fmt_float(est.loo.rho_used),
                NA.to_string(),
                NA.to_string(),
                fmt_float(est.var_hat),
                fmt_float(est.scaled_var),
            ];
            with_output(out.as_deref(), |w| write_table(w, &ESTIMATE_HEADER, &[row]))
        }
        Command::Subsample { input, stat, b_frac, replicates, seed, out } => {
            let method = Method::subsample(b_frac, replicates).map_err(as_usage)?;
            let g = input.load()?;
            let stat = stat.statistic()?;
            let b = subsample_size(g.n(), method.b_frac().unwrap_or(b_frac));
            let est = subsample_variance(&g, &stat, b, replicates, seed)?;
            if est.dropped > 0 {
                eprintln!("{} of {replicates} subsamples had an undefined statistic", est.dropped);
            }
            let row = vec![
                "subsample".to_string(),
                stat.kind.name(),
                g.n().to_string(),
                fmt_float(est.rho_used),
                b.to_string(),
                replicates.to_string(),
                fmt_float(est.var_hat),
                fmt_float(g.n() as f64 * est.var_hat),
            ];
            with_output(out.as_deref(), |w| write_table(w, &ESTIMATE_HEADER, &[row]))
        }
        Command::Ci { input, stat, level, out } => {
            let g = input.load()?;
            let stat = stat.statistic()?;
            let est = jackknife(&g, &stat)?;
            let ci = interval(est.center(), est.var_hat, level.level, level.method()).map_err(as_usage)?;
            let row = ci_record(&input.graph, &stat, ci.center, est.var_hat, ci.lower, ci.upper, ci.level);
            with_output(out.as_deref(), |w| write_table(w, &CI_HEADER, &[row]))
        }
        Command::Split { input, seed, out_train, out_test } => {
            let g = input.load()?;
            let split = split_train_test(&g, seed)?;
            with_output(Some(&out_train), |w| write_edge_list(&split.train, w))?;
            with_output(Some(&out_test), |w| write_edge_list(&split.test, w))?;
            eprintln!(
                "train: {} nodes, {} edges; test: {} nodes, {} edges",
                split.train.n(),
                split.train.m(),
                split.test.n(),
                split.test.m()
            );
            Ok(())
        }
        Command::Compare { graph_a, graph_b, one_indexed, stat, level, out } => {
            let stat = stat.statistic()?;
            if !(level.level > 0.0 && level.level < 1.0) {
                return Err(Error::Argument(format!("level {} must lie in (0, 1)", level.level)));
            }
            let a = load(&graph_a, one_indexed, None)?;
            let b = load(&graph_b, one_indexed, None)?;
            let v = two_sample_compare(&a, &b, &stat, level.level, level.method())?;
            let mut header: Vec<&str> = CI_HEADER.to_vec();
            header.extend(["disjoint", "implied_test_level"]);
            let rows = compare_rows(&graph_a, &graph_b, &stat, &v);
            with_output(out.as_deref(), |w| write_table(w, &header, &rows))
        }
        Command::Experiment { config, out, svg } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::Config { field: "config".into(), msg: format!("{}: {e}", config.display()) })?;
            let cfg = parse_config(&text)?;
            let report = run_ratio_experiment(&cfg)?;
            match out.or(cfg.output_path) {
                Some(path) => emit_report(&report, &path, ReportFormat::Csv)?,
                None => with_output(None, |w| write_ratio_csv(&report, w))?,
            }
            if let Some(path) = svg {
                emit_report(&report, &path, ReportFormat::Svg)?;
            }
            Ok(())
        }
        Command::Bench { graph, one_indexed, model, n, stat, rho, b_frac, replicates, seed, out } => {
            let stat = statistic(&stat, &rho)?;
            let mut methods = vec![Method::Jackknife];
            for f in b_frac {
                methods.push(Method::subsample(f, replicates).map_err(as_usage)?);
            }
            let g = match graph {
                Some(path) => load(&path, one_indexed, None)?,
                None => sample_graph(&ModelSpec::parse(&model)?.build()?, n, seed)?.graph,
            };
            let rows: Vec<Vec<String>> = run_timing_benchmark(&g, &stat, &methods, seed)?
                .into_iter()
                .map(|r| {
                    vec![
                        r.method,
                        r.b_frac.map_or_else(|| NA.to_string(), |b| b.to_string()),
                        format!("{:.6}", r.wall_time),
                        fmt_float(r.var_hat),
                    ]
                })
                .collect();
            with_output(out.as_deref(), |w| write_table(w, &["method", "b_frac", "wall_time_s", "var_hat"], &rows))
        }
    }
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Error::Config { field: THREADS_VAR.into(), msg: format!("expected a positive integer, got `{v}`") }),
        },
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 1,
        ErrorClass::Data => 2,
        ErrorClass::Numerical => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = thread_cap().and_then(|threads| par::with_threads(threads, || run(cli.command)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}
