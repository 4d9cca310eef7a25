use std::path::PathBuf;
use std::process::{Command, Output};

use symtest_core::symmetric::parse_form;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn symtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtest"))
        .args(args)
        .env_remove("SYMTEST_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    let ok = symtest(&["check", &path("example_n3.txt")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("verdict: Nonnegative"));

    let bad = symtest(&["check", &path("example_n4.txt")]);
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("verdict: NotNonnegative"));
    assert!(out.contains("witness: ("));

    let cond = symtest(&["check", &path("anchor_only.txt")]);
    assert_eq!(cond.status.code(), Some(2));
    assert!(stdout(&cond).contains("not satisfied"));

    let over = symtest(&["check", "--override-conditions", &path("anchor_only.txt")]);
    assert_eq!(over.status.code(), Some(0));
}

#[test]
fn check_json_and_csv() {
    let o = symtest(&["--format", "json-lines", "check", &path("example_n4.txt")]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "NotNonnegative");
    assert!(v["witness"].as_array().unwrap().len() == 4);

    let o = symtest(&["check", "--format", "csv", &path("example_n3.txt")]);
    let text = stdout(&o);
    assert!(text.starts_with("pattern,method,outcome"));
    assert_eq!(text.lines().count(), 1 + 5);
}

#[test]
fn parse_errors_are_reported() {
    let o = symtest(&["check", &path("odd.txt")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("odd"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn restrict_prints_univariate() {
    let o = symtest(&["restrict", &path("example_n3.txt"), "--pattern", "2,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("108/5 * x^12"), "{text}");
    assert!(text.contains("nonnegative: true"));
}

#[test]
fn schur_and_kostka() {
    let o = symtest(&["schur", "2,1", "--vars", "3"]);
    let text = stdout(&o);
    assert!(text.contains("(2,1): 1"));
    assert!(text.contains("(1,1,1): 2"));
    let o = symtest(&["kostka", "3,2", "2,2,1"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = symtest(&["kostka", "3,2", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jacobian_rank_and_minor() {
    let o = symtest(&["jacobian-rank", &path("example_n3.txt"), "--point", "1,2,3"]);
    assert!(stdout(&o).contains("rank: 3"));
    let o = symtest(&["jacobian-rank", &path("example_n3.txt"), "--point", "2,2,-5"]);
    assert!(stdout(&o).contains("rank: 2"));
    let o = symtest(&["minor-factor", &path("example_n3.txt")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Schur index (3,2,1)"), "{text}");
    assert!(text.contains("verification: ok"));
}

#[test]
fn counterexample_round_trips_through_the_form_format() {
    let o = symtest(&["counterexample", "--n", "3", "--d", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# lambda = "));
    assert!(text.contains("leg (c)"));
    let form = parse_form(&text).unwrap();
    assert_eq!(form.n(), 3);
    assert_eq!(form.degree(), 12);
    let v: Vec<_> = [3, 2, 1].iter().map(|&x| symtest_core::scalar::int(x)).collect();
    assert!(form.evaluate(&v).unwrap() < symtest_core::scalar::int(0));
}

#[test]
fn minimize_is_deterministic() {
    let a = symtest(&["minimize", &path("example_n4.txt"), "--restarts", "8", "--seed", "3"]);
    let b = symtest(&["--seed", "3", "minimize", &path("example_n4.txt"), "--restarts", "8"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("minimum: -"));
}

#[test]
fn scan_region_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("region.svg");
    let csv = dir.path().join("region.csv");
    let o = symtest(&[
        "scan-region",
        "--format",
        "csv",
        "--alpha",
        "1:2",
        "--beta",
        "-1:1",
        "--gamma",
        "-2:-1",
        "--output",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,gamma,verdict,witness,method"));
    assert_eq!(lines.count(), 12);
    assert!(text.contains("1,0,-2,Nonnegative,,fallback") || text.contains("1,0,-2,UndecidedNumeric,,fallback"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let o = Command::new(env!("CARGO_BIN_EXE_symtest"))
        .args(["scan-region", "--format", "json-lines", "--alpha", "1:1", "--beta", "1:1", "--gamma", "-4:-3"])
        .env("SYMTEST_JOBS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["gamma"], "-4");
    assert_eq!(rows[0]["verdict"], "NotNonnegative");
    assert_eq!(rows[1]["verdict"], "Nonnegative");
}

#[test]
fn scan_region_rejects_bad_templates() {
    let o = symtest(&["scan-region", "--free", "M2^6", "--alpha", "1:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("template shape mismatch"));
}
