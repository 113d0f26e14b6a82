use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dualvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualvc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    let out = dualvc(&["gen", "--variant", "E+", "--m", "6", "--alpha", "2", "--out", path(&inst)]);
    assert!(out.status.success(), "{out:?}");
    for f in ["original.json", "edit.json", "original.dual"] {
        assert!(inst.join(f).exists(), "{f}");
    }
    let edit = fs::read_to_string(inst.join("edit.json")).unwrap();
    assert!(edit.contains("\"kind\":\"edges\"") || edit.contains("\"kind\": \"edges\""), "{edit}");

    let dump = dir.path().join("y.dual");
    let args = ["solve", "--dir", path(&inst), "--algo", "rls", "--seed", "3", "--out", path(&dump)];
    let first = dualvc(&args);
    let second = dualvc(&args);
    assert!(first.status.success(), "{first:?}");
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("success: true"));
    assert!(stdout(&first).contains("verified: true"));

    let verify = dualvc(&["verify", "--instance", path(&inst.join("original.json")), "--dual", path(&inst.join("original.dual"))]);
    assert!(verify.status.success(), "{verify:?}");
}

#[test]
fn solve_from_family_flags_with_a_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("run.csv");
    let out = dualvc(&[
        "solve", "--random", "--variant", "W", "--n", "20", "--m", "40", "--d", "3", "--wmax", "512", "--algo", "ea",
        "--seed", "5", "--log", path(&log),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&log).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("evaluation,accepted,selected,direction,sign,sum_y"));
    let rows = lines.count();
    let evals: usize = stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix("evaluations: "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows, evals);
}

#[test]
fn float_backend_runs() {
    let out = dualvc(&["solve", "--variant", "W-", "--m", "5", "--backend", "float", "--algo", "rls"]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("success: true"));
}

#[test]
fn exhausted_budget_exits_one() {
    let out = dualvc(&["solve", "--variant", "E+", "--m", "10", "--algo", "rls-fifth", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("success: false"));
}

#[test]
fn bench_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let csv = dir.path().join("out.csv");
    fs::write(
        &plan,
        r#"{"cells": [
            {"variant": "E+", "generator": {"kind": "hard", "m": 6}, "algorithm": "rls", "alpha": 2, "trials": 4, "budget": 10000, "seed": 1},
            {"variant": "W", "generator": {"kind": "random", "n": 12, "m": 20, "wmax": 256, "d": 2}, "algorithm": "ea", "alpha": 2, "trials": 3, "budget": 10000, "seed": 9}
        ]}"#,
    )
    .unwrap();
    let out = dualvc(&["bench", "--config", path(&plan), "--out", path(&csv)]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("variant,algorithm,m,D,alpha,wmax,seed,evaluations,success,wall_ms"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("E+,rls,6,1,2,2^6=64,1,"));
    assert!(text.contains("# summary"));

    // same plan, same evaluation counts
    let again = dir.path().join("again.csv");
    assert!(dualvc(&["bench", "--config", path(&plan), "--out", path(&again)]).status.success());
    let evals = |t: &str| -> Vec<String> {
        t.lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split(',').take(9).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(evals(&text), evals(&fs::read_to_string(&again).unwrap()));

    // a single m per group cannot be fitted
    let report = dualvc(&["report", "--csv", path(&csv)]);
    assert_eq!(report.status.code(), Some(2));
}

#[test]
fn report_fits_three_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let csv = dir.path().join("out.csv");
    let cells: Vec<String> = [4, 6, 8]
        .iter()
        .map(|m| {
            format!(
                r#"{{"variant": "E+", "generator": {{"kind": "hard", "m": {m}}}, "algorithm": "rls", "alpha": 2, "trials": 5, "budget": 100000, "seed": 0}}"#
            )
        })
        .collect();
    fs::write(&plan, format!(r#"{{"cells": [{}]}}"#, cells.join(","))).unwrap();
    assert!(dualvc(&["bench", "--config", path(&plan), "--out", path(&csv)]).status.success());
    let out = dualvc(&["report", "--csv", path(&csv)]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("E+"));
}

#[test]
fn verify_rejects_an_inflated_dump() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    assert!(dualvc(&["gen", "--variant", "W-", "--m", "4", "--out", path(&inst)]).status.success());
    let dump = fs::read_to_string(inst.join("original.dual")).unwrap();
    let corrupted: Vec<String> = dump
        .lines()
        .map(|l| match l.strip_prefix("0 ") {
            Some(rest) => {
                let mut tokens: Vec<&str> = rest.split(' ').collect();
                tokens[0] = "1000/1";
                format!("0 {}", tokens.join(" "))
            }
            None => l.to_string(),
        })
        .collect();
    let bad = dir.path().join("bad.dual");
    fs::write(&bad, corrupted.join("\n") + "\n").unwrap();
    let out = dualvc(&["verify", "--instance", path(&inst.join("original.json")), "--dual", path(&bad)]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(stdout(&out).contains("infeasible"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dualvc(&["solve", "--variant", "X"]).status.code(), Some(2));
    assert_eq!(dualvc(&["solve", "--variant", "E", "--m", "4"]).status.code(), Some(2));
    assert_eq!(dualvc(&["solve", "--algo", "rls", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(dualvc(&["bench", "--config", "/nonexistent/plan.json"]).status.code(), Some(2));
    assert_eq!(dualvc(&["frobnicate"]).status.code(), Some(2));
}
