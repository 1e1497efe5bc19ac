use std::path::Path;
use std::process::{Command, Output};

use discres_core::{Poly, VarTable};
use serde_json::Value;

fn discres(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discres"))
        .args(args)
        .env("DISCRES_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn hp_of_ternary_quadratic_with_letters() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(
        dir.path(),
        &["hp", "--builtin", "generic:3,2", "--letters", "--order", "x,y,z"],
    );
    assert_eq!(o.status.code(), Some(0));
    let table = VarTable::new(["a", "b", "c", "d", "e", "f"]).unwrap();
    let got = Poly::parse(stdout(&o).trim(), Some(&table)).unwrap();
    let want = Poly::parse("4*a*c*f - a*e^2 - b^2*f + b*d*e - c*d^2", Some(&table)).unwrap();
    assert!(got == want || got == -&want, "got {got}");
}

#[test]
fn check_remark_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(dir.path(), &["check", "remark"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("remark: pass"));
}

#[test]
fn check_buse_quartic_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(
        dir.path(),
        &[
            "check", "buse", "--d", "4", "--trials", "8", "--seed", "1", "--format", "json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["mode"], "probabilistic");
    assert_eq!(v["seed"], 1);
    let trials = v["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 8);
    let ratios: Vec<&str> = trials.iter().map(|t| t["ratio"].as_str().unwrap()).collect();
    assert!(ratios.iter().all(|r| *r == ratios[0] && *r != "0"));
    assert!(v.get("wall_ms").is_none());
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &[
            "check", "buse", "--d", "3", "--trials", "4", "--seed", "7", "--format", "json",
        ][..],
        &["check", "main", "--n", "2", "--d", "3", "--seed", "3"][..],
        &["hp", "--builtin", "remark", "--order", "x,y,z", "--format", "json"][..],
    ] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let first = discres(a.path(), args);
        let second = discres(b.path(), args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.status.code(), second.status.code());
        // a warm cache gives the same bytes
        let warm = discres(a.path(), args);
        assert_eq!(first.stdout, warm.stdout, "{args:?}");
    }
}

#[test]
fn text_output_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(
        dir.path(),
        &["res", "--var", "x", "--poly", "x^2 - 2", "--poly", "x - y"],
    );
    assert_eq!(stdout(&o), "y^2 - 2\n");
    let o = discres(dir.path(), &["disc", "--var", "x", "--poly", "a*x^2 + b*x + c"]);
    assert_eq!(stdout(&o), "b^2 - 4*a*c\n");
    let o = discres(dir.path(), &["sqrfree", "--poly", "x^3 - x^2"]);
    assert_eq!(stdout(&o), "x^2 - x\n");
    let o = discres(dir.path(), &["disc", "--builtin", "generic:2,2", "--letters"]);
    assert_eq!(stdout(&o), "b^2 - 4*a*c\n");
    let o = discres(
        dir.path(),
        &["macaulay", "--x", "x,y", "--poly", "x^2", "--poly", "y^3"],
    );
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn json_input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(dir.path(), &["gen", "--n", "2", "--d", "3", "--format", "json"]);
    let v = json(&o);
    let file = dir.path().join("form.json");
    std::fs::write(&file, serde_json::to_string(&v["poly"]).unwrap()).unwrap();
    let a = discres(dir.path(), &["sqrfree", "--file", file.to_str().unwrap()]);
    let b = discres(dir.path(), &["gen", "--n", "2", "--d", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn failures_and_errors_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fault = discres(dir.path(), &["check", "buse", "--d", "3", "--inject-fault", "1"]);
    assert_eq!(fault.status.code(), Some(1));
    assert!(stdout(&fault).contains("trial 1 FAILED"));
    for args in [
        &["bogus"][..],
        &["hp", "--order", "q", "--poly", "x"][..],
        &["hp", "--order", "x", "--poly", "x +"][..],
        &["check", "main", "--n", "3", "--d", "3"][..],
        &["check", "remark", "--timeout", "0"][..],
        &["res", "--var", "x", "--poly", "x"][..],
    ] {
        let o = discres(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn timeout_reports_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = discres(dir.path(), &["check", "all", "--timeout", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "timeout");
    assert!(v["completed"].is_array());
}

#[test]
fn cache_stats_and_clear() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    discres(&cache, &["hp", "--builtin", "generic:3,2", "--order", "x,y,z"]);
    let stats = json(&discres(&cache, &["cache", "stats", "--format", "json"]));
    assert!(stats["entries"]["hproj"].as_u64().unwrap() > 0);
    let verified = discres(
        &cache,
        &["hp", "--builtin", "generic:3,2", "--order", "x,y,z", "--verify-cache"],
    );
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(discres(&cache, &["cache", "clear"]).status.code(), Some(0));
    let stats = json(&discres(&cache, &["cache", "stats", "--format", "json"]));
    assert_eq!(stats["entries"]["hproj"], 0);
    assert_eq!(stats["entries"]["bproj-step"], 0);
}
