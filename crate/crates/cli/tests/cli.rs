use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SAT1: &str = "p cnf 3 1\n1 2 3 0\n";
const UNSAT8: &str = "c every sign pattern over three variables\np cnf 3 8\n\
1 2 3 0\n1 2 -3 0\n1 -2 3 0\n1 -2 -3 0\n-1 2 3 0\n-1 2 -3 0\n-1 -2 3 0\n-1 -2 -3 0\n";

fn usat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usat"))
        .args(args)
        .env_remove("UNDERSTANDING_SAT_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_sat_prints_model() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sat1.cnf", SAT1);
    let out = usat(&["solve", &f]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(stdout(&out), "s SATISFIABLE\nv 1 -2 -3 0\n");
}

#[test]
fn solve_unsat_core() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unsat8.cnf", UNSAT8);
    let out = usat(&["solve", &f]);
    let oracle = usat(&["oracle", &f, "--method", "brute"]);
    assert_eq!(oracle.status.code(), Some(20));
    assert_eq!(
        out.status.code(),
        Some(20),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "s UNSATISFIABLE\n");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = usat(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(usat(&["solve", "x.cnf", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        usat(&["solve", "x.cnf", "--order", "sideways"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn missing_or_malformed_file_exits_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.cnf", "p cnf 3 1\n1 2 0\n");
    assert_eq!(usat(&["solve", &bad]).status.code(), Some(1));
    assert_eq!(
        usat(&["solve", "/nonexistent/file.cnf"]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_methods_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sat1.cnf", SAT1);
    let brute = usat(&["oracle", &f, "--method", "brute"]);
    assert_eq!(brute.status.code(), Some(10));
    assert_eq!(stdout(&brute), "s SATISFIABLE\nv -1 -2 3 0\n");
    assert_eq!(usat(&["oracle", &f]).status.code(), Some(10));
}

#[test]
fn trace_file_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unsat8.cnf", UNSAT8);
    let t1 = dir.path().join("t1.jsonl");
    let t2 = dir.path().join("t2.jsonl");
    for t in [&t1, &t2] {
        usat(&[
            "solve",
            &f,
            "--order",
            "perm:3",
            "--trace",
            t.to_str().unwrap(),
        ]);
    }
    let a = fs::read(&t1).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(&t2).unwrap());
    let first: serde_json::Value =
        serde_json::from_str(String::from_utf8(a).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["kind"], "CLAUSE");
}

#[test]
fn json_outcome() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sat1.cnf", SAT1);
    let out = usat(&["solve", &f, "--json", "--default-free"]);
    assert_eq!(out.status.code(), Some(10));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "SAT");
    assert_eq!(v["assignment"]["default_free"], true);
}

fn read(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap()
}

#[test]
fn fuzz_is_reproducible_and_env_seed_wins() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, seed: &str, env: Option<&str>| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_usat"));
        cmd.args([
            "--quiet", "fuzz", "--vars", "5..7", "--count", "40", "--seed", seed, "--out",
        ])
        .arg(&out)
        .env_remove("UNDERSTANDING_SAT_SEED");
        if let Some(e) = env {
            cmd.env("UNDERSTANDING_SAT_SEED", e);
        }
        let status = cmd.output().unwrap();
        assert_eq!(status.status.code(), Some(0));
        assert!(status.stderr.is_empty());
        out
    };
    let a = run("a.jsonl", "1", None);
    let b = run("b.jsonl", "1", None);
    let c = run("c.jsonl", "2", None);
    let d = run("d.jsonl", "2", Some("1"));
    assert_eq!(read(&a), read(&b));
    assert_eq!(
        read(&a.with_extension("csv")),
        read(&b.with_extension("csv"))
    );
    assert_ne!(read(&a), read(&c));
    assert_eq!(read(&a), read(&d));
    let text = String::from_utf8(read(&a)).unwrap();
    assert_eq!(text.lines().count(), 40);
    let summary = String::from_utf8(read(&a.with_extension("csv"))).unwrap();
    assert!(summary.ends_with("total,40,1.000000\n"));
}

#[test]
fn enumerate_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("enum.jsonl");
    let o = usat(&[
        "enumerate",
        "--max-vars",
        "3",
        "--max-clauses",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(read(&out)).unwrap().lines().count(), 21);
}

#[test]
fn minimize_round_trip() {
    let dir = TempDir::new().unwrap();
    // A real record: a planted wrong Unsat claim on a satisfiable instance.
    let rec = serde_json::json!({
        "dimacs": "p cnf 4 2\n1 2 3 0\n-1 2 4 0\n",
        "config": {"clause_order": "input", "default_free": false, "trace": false, "depth_guard_factor": 2},
        "solver_outcome": {"status": "UNSAT", "failing_clause": 1},
        "oracle_verdict": {"verdict": {"status": "SAT", "model": {"literals": [-1, -2, 3, -4], "default_free": false}}, "method": "brute", "nodes": 3},
        "kind": "FalseUnsat",
        "minimized": false
    });
    let input = write(&dir, "cex.json", &rec.to_string());
    let out = dir.path().join("cex.min.json");
    let o = usat(&["minimize", "--in", &input, "--out", out.to_str().unwrap()]);
    // The real solver answers Sat, so the record no longer replays.
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let back: serde_json::Value = serde_json::from_slice(&read(&out)).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn bench_writes_samples_and_fit() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bench.csv");
    let o = usat(&[
        "bench",
        "--sizes",
        "16,32,64",
        "--reps",
        "2",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(read(&out)).unwrap();
    assert!(csv.starts_with("m,n,ops,outcome\n"));
    assert_eq!(csv.lines().count(), 7);
    let fit: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(fit["exponent"].is_number());
}
