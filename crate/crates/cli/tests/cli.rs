use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const TRIANGLE: &str = "vertex a sym 2 S=1\nvertex b sym 2 S=1\nvertex c sym 2 S=1\nedge a.1 b.0\nedge b.1 c.0\nedge c.1 a.0\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_orientkit")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_triangle() {
    let d = TempDir::new().unwrap();
    let tri = write(&d, "tri.go", TRIANGLE);
    let (code, v) = run_json(&["solve", "--instance", s(&tri), "--count"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["status"], "SAT");
    assert_eq!(v["result"]["count"], 2);
    assert_eq!(v["algorithm"], "2sat");
    let (code, v) = run_json(&["solve", "--instance", s(&tri), "--algorithm", "brute"]);
    assert_eq!((code, v["algorithm"].as_str()), (0, Some("brute")));
}

#[test]
fn solve_unsat_and_unknown() {
    let d = TempDir::new().unwrap();
    // A single edge between two 1-in-1 vertices cannot point into both.
    let p = write(&d, "x.go", "vertex a const in\nvertex b const in\nedge a.0 b.0\n");
    let (code, v) = run_json(&["solve", "--instance", s(&p)]);
    assert_eq!((code, v["result"]["status"].as_str()), (1, Some("UNSAT")));

    let hard = "vertex a sym 3 S=0,3\nvertex b sym 3 S=1\nedge a.0 b.0\nedge a.1 b.1\nedge a.2 b.2\n";
    let p = write(&d, "h.go", hard);
    let (code, v) = run_json(&["solve", "--instance", s(&p)]);
    assert_eq!((code, v["result"]["status"].as_str()), (3, Some("unknown")));
    let (code, v) = run_json(&["solve", "--instance", s(&p), "--allow-brute"]);
    assert_eq!((code, v["algorithm"].as_str()), (1, Some("brute")));
}

#[test]
fn solve_wrong_algorithm_is_usage_error() {
    let d = TempDir::new().unwrap();
    let tri = write(&d, "tri.go", TRIANGLE);
    let (code, _, err) = run(&["solve", "--instance", s(&tri), "--algorithm", "k5"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["solve", "--instance", s(&tri), "--algorithm", "magic"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_name_the_line() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "bad.go", "vertex a sym 2 S=1\nedge a.0\n");
    let (code, _, err) = run(&["solve", "--instance", s(&p)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn classify_verdicts() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.txt", "{0,3}-in-3\n1-in-3\n");
    let (code, v) = run_json(&["classify", "--gamma", s(&g), "--constants"]);
    assert_eq!((code, v["result"]["tag"].as_str()), (0, Some("NPComplete")));

    let g = write(&d, "p.txt", "1-in-3\neq 5\n");
    let (code, v) = run_json(&["classify", "--gamma", s(&g), "--planar"]);
    assert_eq!((code, v["result"]["tag"].as_str(), v["algorithm"].as_str()), (0, Some("P"), Some("k5")));

    let g = write(&d, "u.txt", "{1,4}-in-8\n{0,2}-in-2\n");
    let (code, v) = run_json(&["classify", "--gamma", s(&g)]);
    assert_eq!((code, v["result"]["tag"].as_str()), (3, Some("Unknown")));

    let g = write(&d, "t.txt", "{0,3}-in-7\n");
    let (code, v) = run_json(&["classify", "--gamma", s(&g), "--terminator", "-3"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn kplumber_corner_cross_is_unsat() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "x.txt", "XS\nSS\n");
    let (code, v) = run_json(&["kplumber", "--grid", s(&g)]);
    assert_eq!((code, v["result"]["status"].as_str()), (1, Some("UNSAT")));

    let g = write(&d, "o.txt", "DD\n");
    let (code, v) = run_json(&["kplumber", "--grid", s(&g)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cells"], serde_json::json!([["E", "W"]]));

    let g = write(&d, "c.txt", "CC\nCC\n");
    assert_eq!(run(&["kplumber", "--grid", s(&g)]).0, 3);
    let (code, v) = run_json(&["kplumber", "--grid", s(&g), "--allow-brute"]);
    assert_eq!((code, v["algorithm"].as_str()), (0, Some("brute")));
}

#[test]
fn tiling_commands() {
    let d = TempDir::new().unwrap();
    let r = write(&d, "r.txt", "##\n##\n");
    let (code, v) = run_json(&["tile", "--region", s(&r), "--tiles", "O", "--algorithm", "greedy"]);
    assert_eq!((code, v["result"]["status"].as_str()), (0, Some("SAT")));
    let r = write(&d, "r23.txt", "###\n###\n");
    let (code, v) = run_json(&["tile", "--region", s(&r), "--tiles", "O", "--count"]);
    assert_eq!((code, v["result"]["count"].as_u64()), (1, Some(0)));
    assert!(v["result"]["obstruction"].is_string());
    let r = write(&d, "r44.txt", "####\n####\n####\n####\n");
    let (code, _) = run_json(&["tile", "--region", s(&r), "--tiles", "S", "--algorithm", "greedy"]);
    assert_eq!(code, 1);
    assert_eq!(run(&["tile", "--region", s(&r), "--tiles", "T", "--algorithm", "greedy"]).0, 2);

    let g = write(&d, "g.txt", "tiles O\naa##\naa##\n");
    let (code, v) = run_json(&["tile", "verify-gadget", "--gadget", s(&g), "--target", "gen 1 allowed=0;1"]);
    assert_eq!((code, v["result"]["matches"].as_bool()), (0, Some(true)));
    let (code, _) = run_json(&["tile", "verify-gadget", "--gadget", s(&g), "--target", "const in"]);
    assert_eq!(code, 1);
}

#[test]
fn simulate_shipped_gadget() {
    let d = TempDir::new().unwrap();
    let text = orientkit::simulate::library::text("sync_from_eq3").unwrap();
    let g = write(&d, "sync.gdg", text);
    let (code, v) = run_json(&["simulate", "--gadget", s(&g)]);
    assert_eq!((code, v["result"]["simulates"].as_bool()), (0, Some(true)));
    let (code, _) = run_json(&["simulate", "--gadget", s(&g), "--target", "eq 4"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_suite_passes_and_is_deterministic() {
    let (code, a, _) = run(&["verify-suite", "--seed", "5"]);
    assert_eq!(code, 0, "{a}");
    let (_, b, _) = run(&["verify-suite", "--seed", "5"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["result"]["passed"], true);
    assert!(v["result"]["classifier"].as_array().unwrap().len() >= 20);
}

fn copy_gadgets(d: &TempDir) {
    for (name, text) in orientkit::simulate::library::FILES {
        write(d, &format!("{name}.gdg"), text);
    }
}

#[test]
fn verify_suite_on_edited_gadgets() {
    let d = TempDir::new().unwrap();
    copy_gadgets(&d);
    assert_eq!(run(&["verify-suite", "--gadgets", s(d.path())]).0, 0);

    // Drop the edge joining the two equalizers (and the embedding, which
    // no longer has all externals on one face): they stop synchronizing.
    let broken: String = orientkit::simulate::library::text("sync_from_eq3")
        .unwrap()
        .replace("edge A.2 B.2\n", "")
        .replace("eq 3", "eq 2")
        .lines()
        .filter(|l| !l.starts_with("rot ") && !l.starts_with("outer "))
        .map(|l| format!("{l}\n"))
        .collect();
    write(&d, "sync_from_eq3.gdg", &broken);
    let (code, v) = run_json(&["verify-suite", "--gadgets", s(d.path())]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["passed"], false);

    write(&d, "sync_from_eq3.gdg", "vertex A eq 3\nedge A.0\n");
    let (code, _, err) = run(&["verify-suite", "--gadgets", s(d.path())]);
    assert_eq!(code, 2);
    assert!(err.contains("sync_from_eq3") && err.contains("line 2"), "{err}");
}

#[test]
fn text_format() {
    let d = TempDir::new().unwrap();
    let tri = write(&d, "tri.go", TRIANGLE);
    let (code, out, _) = run(&["--format", "text", "solve", "--instance", s(&tri)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("command: solve\n"));
    assert!(out.contains("status: SAT\n"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["solve", "--instance", "/nonexistent/file"]).0, 2);
}
