use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netjack(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netjack"))
        .args(args)
        .current_dir(dir)
        .env_remove("NETJACK_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses a one-record CSV into (header, record) pairs.
fn record(csv: &str) -> Vec<(String, String)> {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from);
    let row = lines.next().unwrap().split(',').map(String::from);
    header.zip(row).collect()
}

fn field(rec: &[(String, String)], name: &str) -> String {
    rec.iter().find(|(k, _)| k == name).unwrap().1.clone()
}

#[test]
fn jackknife_on_a_path() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.txt"), "0 1\n1 2\n").unwrap();
    let out = stdout(&netjack(&["jackknife", "--graph", "p.txt", "--stat", "edge-density", "--rho", "1"], dir.path()));
    let rec = record(&out);
    assert_eq!(field(&rec, "method"), "jackknife");
    assert_eq!(field(&rec, "n"), "3");
    assert_eq!(field(&rec, "b"), "NA");
    assert_eq!(field(&rec, "var_hat").parse::<f64>().unwrap(), 2.0 / 3.0);
    assert_eq!(field(&rec, "scaled_var").parse::<f64>().unwrap(), 2.0);
}

#[test]
fn one_indexed_triangle_and_dropped_lines() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.txt"), "# a triangle\n1 2\n2 3\n3 1\n1 1\n2 1\n").unwrap();
    let o = netjack(
        &["jackknife", "--graph", "t.txt", "--one-indexed", "--stat", "edge-density", "--rho", "1"],
        dir.path(),
    );
    let rec = record(&stdout(&o));
    assert_eq!(field(&rec, "n"), "3");
    // K3 minus any node is a single edge: zero variance
    assert_eq!(field(&rec, "var_hat").parse::<f64>().unwrap(), 0.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dropped 2"));
}

#[test]
fn simulate_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.txt", "b.txt"] {
        stdout(&netjack(&["simulate", "--model", "sbm3", "--n", "80", "--seed", "3", "--out", name], dir.path()));
    }
    let a = fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.txt")).unwrap());
    assert!(String::from_utf8_lossy(&a).starts_with("# nodes=80\n"));
    let ci = stdout(&netjack(&["ci", "--graph", "a.txt", "--stat", "transitivity", "--level", "0.975"], dir.path()));
    let rec = record(&ci);
    let (lower, center, upper) = (
        field(&rec, "lower").parse::<f64>().unwrap(),
        field(&rec, "center").parse::<f64>().unwrap(),
        field(&rec, "upper").parse::<f64>().unwrap(),
    );
    assert!(lower <= center && center <= upper);
    assert_eq!(field(&rec, "graph"), "a.txt");
}

#[test]
fn subsample_split_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&netjack(&["simulate", "--model", "er:0.2", "--n", "100", "--seed", "1", "--out", "g.txt"], dir.path()));
    let args = ["subsample", "--graph", "g.txt", "--stat", "edge-density", "--b-frac", "0.2", "--B", "50", "--seed", "4"];
    let first = stdout(&netjack(&args, dir.path()));
    assert_eq!(first, stdout(&netjack(&args, dir.path())));
    let rec = record(&first);
    assert_eq!((field(&rec, "b").as_str(), field(&rec, "B").as_str()), ("20", "50"));

    stdout(&netjack(
        &["split", "--graph", "g.txt", "--seed", "2", "--out-train", "a.txt", "--out-test", "b.txt"],
        dir.path(),
    ));
    let cmp = stdout(&netjack(
        &["compare", "--graph-a", "a.txt", "--graph-b", "b.txt", "--stat", "edge-density", "--level", "0.975"],
        dir.path(),
    ));
    let lines: Vec<&str> = cmp.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].ends_with("disjoint,implied_test_level"));
    let same = stdout(&netjack(
        &["compare", "--graph-a", "a.txt", "--graph-b", "a.txt", "--stat", "edge-density"],
        dir.path(),
    ));
    assert!(same.lines().nth(1).unwrap().contains(",false,"));
}

#[test]
fn experiment_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"model": "gr2", "n_list": [30, 40], "reps": 5, "statistics": ["edge-density"],
            "methods": ["jackknife"], "output_path": "from_config.csv"}"#,
    )
    .unwrap();
    stdout(&netjack(&["experiment", "--config", "c.json", "--svg", "r.svg"], dir.path()));
    let csv = fs::read_to_string(dir.path().join("from_config.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let svg = fs::read_to_string(dir.path().join("r.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="marker""#).count(), 2);
    let printed = stdout(&netjack(&["experiment", "--config", "c.json", "--out", "-"], dir.path()));
    assert!(printed.is_empty());
    assert_eq!(fs::read_to_string(dir.path().join("-")).unwrap(), csv);
}

#[test]
fn bench_reports_each_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&netjack(&["bench", "--n", "120", "--B", "20", "--b-frac", "0.2,0.5"], dir.path()));
    let methods: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(methods, ["jackknife", "subsample", "subsample"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.txt"), "0 1\n1 2\n").unwrap();
    fs::write(dir.path().join("bad.txt"), "0 1\n1\n").unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"model": "sbm3", "n_list": [], "statistics": ["edge-density"]}"#).unwrap();
    let code = |args: &[&str]| netjack(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["jackknife", "--graph", "p.txt"]), 1);
    assert_eq!(code(&["jackknife", "--graph", "p.txt", "--stat", "nonsense"]), 1);
    assert_eq!(code(&["jackknife", "--graph", "p.txt", "--stat", "edge-density", "--rho", "2"]), 1);
    assert_eq!(code(&["experiment", "--config", "bad.json"]), 1);
    assert_eq!(code(&["experiment", "--config", "missing.json"]), 1);
    assert_eq!(code(&["jackknife", "--graph", "bad.txt", "--stat", "edge-density"]), 2);
    assert_eq!(code(&["jackknife", "--graph", "missing.txt", "--stat", "edge-density"]), 2);
    // a triangle statistic needs at least four nodes for leave-one-out
    assert_eq!(code(&["jackknife", "--graph", "p.txt", "--stat", "triangle-density", "--rho", "1"]), 2);
    assert_eq!(code(&["split", "--graph", "p.txt", "--out-train", "a", "--out-test", "b"]), 2);

    let threads = Command::new(env!("CARGO_BIN_EXE_netjack"))
        .args(["jackknife", "--graph", "p.txt", "--stat", "edge-density"])
        .current_dir(dir.path())
        .env("NETJACK_THREADS", "0")
        .status()
        .unwrap();
    assert_eq!(threads.code(), Some(1));
}
