use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bbdcqo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn instance(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["generate", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    ok(&args);
    path
}

#[test]
fn generate_counts_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let a = instance(
        dir.path(),
        "a.json",
        &["--n", "12", "--topology", "sparse-chain", "--seed", "7"],
    );
    let b = instance(
        dir.path(),
        "b.json",
        &["--n", "12", "--topology", "sparse-chain", "--seed", "7"],
    );
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(doc["quadratic"].as_array().unwrap().len(), 11);
    assert_eq!(doc["cubic"].as_array().unwrap().len(), 10);
    assert_eq!(doc["seed"], 7);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let dense = json(&[
        "generate",
        "--n",
        "20",
        "--topology",
        "dense",
        "--n2",
        "36",
        "--n3",
        "48",
        "--seed",
        "1",
    ]);
    assert_eq!(dense["quadratic"].as_array().unwrap().len(), 36);
    assert_eq!(dense["cubic"].as_array().unwrap().len(), 48);
}

#[test]
fn brute_solve_matches_oracle_scan() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(
        dir.path(),
        "p.json",
        &[
            "--n",
            "10",
            "--topology",
            "dense",
            "--n2",
            "15",
            "--n3",
            "12",
            "--seed",
            "3",
        ],
    );
    let rec = json(&["solve", p.to_str().unwrap(), "--solver", "brute"]);
    let doc = bbdcqo::hubo::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let mut terms: Vec<bbdcqo_oracle::Term> = doc
        .problem
        .linear()
        .iter()
        .map(|&(i, c)| (vec![i], c))
        .collect();
    terms.extend(
        doc.problem
            .quadratic()
            .iter()
            .map(|(ij, c)| (ij.to_vec(), *c)),
    );
    terms.extend(
        doc.problem
            .cubic()
            .iter()
            .map(|(ijk, c)| (ijk.to_vec(), *c)),
    );
    let (idx, e) = bbdcqo_oracle::naive_minimum(10, &terms);
    assert!((rec["best_energy"].as_f64().unwrap() - e).abs() < 1e-9);
    let bits: String = (0..10)
        .map(|q| if (idx >> q) & 1 == 1 { '1' } else { '0' })
        .collect();
    assert_eq!(rec["best_assignment"], bits.as_str());
}

#[test]
fn depth_zero_tree_equals_plain_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "p.json", &["--n", "8", "--seed", "2"]);
    let p = p.to_str().unwrap();
    let common = ["--iterations", "2", "--shots", "300", "--seed", "11"];
    let mut a = vec!["solve", p, "--solver", "bbb", "--K", "0"];
    a.extend_from_slice(&common);
    let mut b = vec!["solve", p, "--solver", "bfdcqo"];
    b.extend_from_slice(&common);
    let (tree, plain) = (json(&a), json(&b));
    for key in ["best_energy", "best_assignment", "evals"] {
        assert_eq!(tree[key], plain[key], "{key}");
    }
    assert_eq!(tree["tree"]["bf_runs"], 1);
}

#[test]
fn sa_record_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "p.json", &["--n", "12", "--seed", "1"]);
    let rec = json(&[
        "solve",
        p.to_str().unwrap(),
        "--solver",
        "sa",
        "--sweeps",
        "50",
        "--reads",
        "7",
    ]);
    assert_eq!(rec["evals"]["sa_flips"], 50 * 7 * 12);
    assert_eq!(rec["evals"]["total"], 50 * 7 * 12);
    assert!(rec.get("wall_time_s").is_none());
    let csv = ok(&[
        "solve",
        p.to_str().unwrap(),
        "--solver",
        "greedy",
        "--reads",
        "5",
        "--format",
        "csv",
    ]);
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("solver,seed,n,best_energy"));
    assert!(lines.next().unwrap().starts_with("greedy,0,12,"));
    let timed = json(&[
        "solve",
        p.to_str().unwrap(),
        "--solver",
        "greedy",
        "--timing",
    ]);
    assert!(timed["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn tree_dump_and_exact_records() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "p.json", &["--n", "8", "--seed", "4"]);
    let dump = dir.path().join("tree.csv");
    let rec = json(&[
        "solve",
        p.to_str().unwrap(),
        "--solver",
        "bbb",
        "--K",
        "3",
        "--W",
        "2",
        "--iterations",
        "1",
        "--shots",
        "100",
        "--tree-out",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(rec["tree"]["bf_runs"], 7);
    assert_eq!(rec["evals"]["quantum_shots"], 700);
    let text = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert_eq!(rec["tree"]["dump"], text.as_str());

    let brute = json(&["solve", p.to_str().unwrap(), "--solver", "brute"]);
    for oracle in ["brute", "trivial"] {
        let ex = json(&[
            "solve",
            p.to_str().unwrap(),
            "--solver",
            "exact-bbb",
            "--oracle",
            oracle,
            "--iterations",
            "1",
            "--shots",
            "50",
        ]);
        assert!(
            (ex["best_energy"].as_f64().unwrap() - brute["best_energy"].as_f64().unwrap()).abs()
                < 1e-9
        );
        assert!(ex["exact"]["node_count"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn bench_self_comparison_ties() {
    let out = json(&[
        "bench",
        "--generate",
        "3",
        "--n",
        "8",
        "--baseline",
        "bbb",
        "--K",
        "2",
        "--iterations",
        "1",
        "--shots",
        "200",
    ]);
    assert_eq!(out["tallies"]["tie"], 3);
    for row in out["rows"].as_array().unwrap() {
        assert_eq!(row["delta_e"], 0.0);
        assert_eq!(row["evals_bbb"], row["evals_baseline"]);
    }
}

#[test]
fn bench_matches_sa_budget() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let out = json(&[
        "bench",
        "--generate",
        "2",
        "--n",
        "12",
        "--K",
        "4",
        "--W",
        "2",
        "--iterations",
        "3",
        "--shots",
        "2000",
        "--curve-out",
        curve.to_str().unwrap(),
    ]);
    let t = &out["tallies"];
    assert_eq!(
        t["win"].as_u64().unwrap() + t["tie"].as_u64().unwrap() + t["loss"].as_u64().unwrap(),
        2
    );
    for row in out["rows"].as_array().unwrap() {
        let (a, b) = (
            row["evals_bbb"].as_f64().unwrap(),
            row["evals_baseline"].as_f64().unwrap(),
        );
        assert_eq!(a, 9.0 * 3.0 * 2000.0);
        assert!((a - b).abs() <= 0.05 * a);
        assert_eq!(row["baseline_sweeps"], 45);
        assert_eq!(row["metric"], "ratio");
        assert!(row["quality_bbb"].as_f64().unwrap() <= 1.0 + 1e-12);
    }
    let text = std::fs::read_to_string(&curve).unwrap();
    assert!(text.starts_with("instance,solver,evals,best_energy,metric,quality"));
    assert!(text.lines().any(|l| l.contains(",sa,")));
}

#[test]
fn bench_refuses_uneven_budgets() {
    let args = [
        "bench",
        "--generate",
        "1",
        "--n",
        "8",
        "--K",
        "1",
        "--iterations",
        "1",
        "--shots",
        "100",
        "--sa-sweeps",
        "100",
    ];
    assert_eq!(run(&args).status.code(), Some(2));
    let mut allowed = args.to_vec();
    allowed.push("--allow-uneven");
    ok(&allowed);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(dir.path(), "p.json", &["--n", "12", "--seed", "0"]);
    let p = p.to_str().unwrap();
    assert_eq!(
        run(&["solve", p, "--solver", "bfdcqo", "--qubit-cap", "10"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "solve",
            p,
            "--solver",
            "bbb",
            "--K",
            "3",
            "--run-budget",
            "5"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        run(&["solve", p, "--solver", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "/does/not/exist.json", "--solver", "sa"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", p, "--solver", "bfdcqo", "--cvar", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["generate", "--n", "5", "--topology", "dense"])
            .status
            .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "quadratic": [[0, 0, 1.0]]}"#).unwrap();
    assert_eq!(
        run(&["solve", bad.to_str().unwrap(), "--solver", "brute"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn quadratize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = instance(
        dir.path(),
        "p.json",
        &[
            "--n",
            "8",
            "--topology",
            "dense",
            "--n2",
            "8",
            "--n3",
            "6",
            "--seed",
            "2",
        ],
    );
    let q = dir.path().join("q.json");
    ok(&[
        "quadratize",
        p.to_str().unwrap(),
        "--out",
        q.to_str().unwrap(),
    ]);
    let report = json(&["verify-reduction", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(report["min_matches"], true);
    assert_eq!(report["constraints_hold"], true);
    let weak = dir.path().join("weak.json");
    ok(&[
        "quadratize",
        p.to_str().unwrap(),
        "--penalty",
        "0.01",
        "--out",
        weak.to_str().unwrap(),
    ]);
    assert_eq!(
        run(&[
            "verify-reduction",
            p.to_str().unwrap(),
            weak.to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
}
