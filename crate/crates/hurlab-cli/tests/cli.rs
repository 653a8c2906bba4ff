use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hurlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurlab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const ORBITS: [&str; 9] = ["orbits", "--group", "S3", "--c", "order=2", "--g-inf", "1", "--n", "4"];

#[test]
fn orbits_report() {
    let r = json(&hurlab(&[&ORBITS[..], &["--no-timing"]].concat()));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["experiment"], "orbits");
    assert_eq!(r["summary"]["orbits"], 1);
    assert_eq!(r["summary"]["tuples"], 8);
    assert_eq!(r["rows"][0][1], 8);
    assert!(r.get("wall_clock_seconds").is_none());
    assert_eq!(r["fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn timing_does_not_change_the_fingerprint() {
    let a = json(&hurlab(&ORBITS));
    let b = json(&hurlab(&[&ORBITS[..], &["--no-timing"]].concat()));
    assert!(a["wall_clock_seconds"].is_number());
    assert_eq!(a["fingerprint"], b["fingerprint"]);
}

#[test]
fn csv_output_carries_the_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orbits.csv");
    let o = hurlab(&[&ORBITS[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# tool: hurlab"));
    assert!(text.contains("# fingerprint: "));
    assert!(text.contains("orbit,size,representative"));
}

#[test]
fn output_is_identical_for_any_worker_count() {
    let runs: [&[&str]; 3] = [
        &ORBITS,
        &["randgrp", "sample", "--ell", "3", "--n", "4", "--trials", "20000", "--seed", "5"],
        &["arith", "ff-moment", "--q", "3", "--dmax", "5", "--H", "5"],
    ];
    for args in runs {
        let one = hurlab(&[&["--workers", "1", "--no-timing"], args].concat());
        let four = hurlab(&[&["--workers", "4", "--no-timing"], args].concat());
        assert_eq!(code(&one), 0, "{args:?}: {}", String::from_utf8_lossy(&one.stderr));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn toml_and_json_configs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let toml = write(dir.path(), "e.toml", "[run]\nno-timing = true\n\n[orbits]\ngroup = \"S3\"\nc = \"order=2\"\ng-inf = 1\nn = 4\n");
    let js = write(dir.path(), "e.json", r#"{"orbits": {"group": "S3", "c": "order=2", "g-inf": 1, "n": 4}}"#);
    let a = json(&hurlab(&["run", &toml]));
    let b = json(&hurlab(&["run", &js]));
    let c = json(&hurlab(&ORBITS));
    assert_eq!(a["fingerprint"], b["fingerprint"]);
    assert_eq!(a["fingerprint"], c["fingerprint"]);
}

#[test]
fn bad_configs_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed.toml", "[orbits\ngroup = "),
        ("unknown.toml", "[orbits]\ngroup = \"S3\"\ng-inf = 1\nn = 4\ncolour = \"red\"\n"),
        ("two.toml", "[orbits]\ngroup = \"S3\"\ng-inf = 1\nn = 4\n\n[frob-count]\ngroup = \"S3\"\ng-inf = 1\nq = \"5\"\nn-max = 3\n"),
        ("none.toml", "[run]\nworkers = 2\n"),
    ];
    for (name, body) in cases {
        let p = write(dir.path(), name, body);
        assert_eq!(code(&hurlab(&["run", &p])), 3, "{name}");
    }
    assert_eq!(code(&hurlab(&["orbits", "--group", "S3", "--g-inf", "1", "--n", "4", "--colour", "red"])), 3);
    assert_eq!(code(&hurlab(&["orbits", "--group", "NoSuchGroup", "--g-inf", "1", "--n", "4"])), 3);
}

#[test]
fn q_sharing_a_factor_with_g_exits_3() {
    let o = hurlab(&["frob-count", "--group", "S3", "--g-inf", "1", "--q", "3", "--n-max", "4"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gcd"));
}

#[test]
fn exceeding_the_budget_exits_2() {
    assert_eq!(code(&hurlab(&[&ORBITS[..], &["--budget", "1"]].concat())), 2);
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.json");
    assert_eq!(code(&hurlab(&[&ORBITS[..], &["--out", out.to_str().unwrap()]].concat())), 1);
}

#[test]
fn verify_suites() {
    assert_eq!(code(&hurlab(&["verify", "unknown"])), 3);
    let o = hurlab(&["verify", "bridge", "--quick"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("[PASS] 9 bridge"));
}
