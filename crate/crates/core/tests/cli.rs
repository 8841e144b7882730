//! End-to-end checks of the `weightgr` binary: JSON round trips, table
//! rendering, exit codes and deterministic output.

use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;
use weightgr::weights::{enumerate, parse_profile, stats, Context, Which};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weightgr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_weightgr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn profile_arg(p: &Value) -> String {
    p.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn enumerate_then_stats_round_trip() {
    for (ctx_args, ctx) in [
        (vec!["--f", "3", "--case", "split"], Context::split(3)),
        (vec!["--f", "3", "--case", "nonsplit", "--jrho", "0b101"], Context::nonsplit(3, 5).unwrap()),
    ] {
        let mut args = vec!["enumerate"];
        args.extend(&ctx_args);
        let listed = run(&args);
        let doc = json(&listed);
        let profiles = doc["profiles"].as_array().unwrap();
        assert_eq!(profiles.len(), enumerate(&ctx, Which::P).unwrap().len());
        assert_eq!(doc["count"].as_u64().unwrap() as usize, profiles.len());

        let mut singles = Vec::new();
        for p in profiles {
            let lam = profile_arg(p);
            let mut args = vec!["stats", "--lambda", lam.as_str()];
            args.extend(&ctx_args);
            let got = json(&run(&args));
            let want = serde_json::to_value(stats(&ctx, &parse_profile(&lam).unwrap()).unwrap()).unwrap();
            assert_eq!(got, want, "{lam}");
            singles.push(got);
        }

        let mut args = vec!["stats", "--from", "-"];
        args.extend(&ctx_args);
        let batch = json(&run_stdin(&args, &listed.stdout));
        assert_eq!(batch, Value::Array(singles));
    }
}

#[test]
fn hilbert_table_shows_closed_form() {
    let out = run(&["hilbert", "--f", "2", "--case", "split", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(3+t)^2 + (1-t)^2"), "{text}");
    assert!(text.contains("10 + 4t + 2t^2"), "{text}");
}

#[test]
fn hilbert_csv_has_header_and_rows() {
    let out = run(&["hilbert", "--f", "3", "--case", "nonsplit", "--jrho", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("quantity,value"));
    assert!(lines.any(|l| l == "agree,true"), "{text}");
}

#[test]
fn small_nonsplit_enumeration() {
    let doc = json(&run(&["enumerate", "--f", "1", "--case", "nonsplit", "--jrho", "0", "--which", "P"]));
    assert_eq!(doc["count"], 2);
    assert_eq!(doc["profiles"], serde_json::json!([["X0"], ["P1"]]));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["enumerate", "--f", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = run(&["stats", "--f", "2", "--lambda", "Q9,X0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = run(&["enumerate", "--f", "2", "--case", "nonsplit", "--jrho", "0b111"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_with_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}

#[test]
fn degenerates_suite_passes_at_twelve() {
    let out = run(&["verify", "--suite", "degenerates", "--f", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn full_verification_passes_quickly() {
    let start = Instant::now();
    let out = run(&["verify", "--all", "--report", "json"]);
    assert!(start.elapsed() < Duration::from_secs(60));
    let doc = json(&out);
    let checks = doc.as_array().or_else(|| doc["checks"].as_array()).expect("check list");
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["enumerate", "--f", "4"],
        vec!["grsubquot", "--f", "3", "--case", "nonsplit", "--jrho", "3", "--i0", "0", "--i0p", "2"],
        vec!["verify", "--all", "--f", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
