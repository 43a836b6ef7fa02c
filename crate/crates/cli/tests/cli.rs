use std::process::{Command, Output};

use serde_json::Value;

fn corput(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corput"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = corput(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(a) => a.iter().for_each(|x| numbers(x, out)),
        Value::Object(m) => m.values().for_each(|x| numbers(x, out)),
        _ => {}
    }
}

#[test]
fn verify_all_default_passes() {
    let o = corput(&["verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("3.33346"));
    assert!(!text.contains("FAIL "));
    assert!(text.contains("DISCREPANCY"));
}

#[test]
fn verify_all_json_reports_discrepancies() {
    let doc = json(&["verify-all"]);
    for key in ["config", "results", "discrepancies"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["results"]["all_pass"], Value::Bool(true));
    let checks = doc["results"]["checks"].as_array().unwrap();
    let quad = checks.iter().find(|c| c["id"] == "quadratic-integral").unwrap();
    assert!((quad["value"].as_f64().unwrap() - 3.33346).abs() < 1e-4);

    let d = doc["discrepancies"].as_array().unwrap();
    let by_id = |id: &str| d.iter().find(|x| x["id"] == id).unwrap().clone();
    let rl = by_id("fourier-coefficient-sign");
    assert!(rl["printed"].as_f64().unwrap().abs() < 1e-12);
    assert!((rl["computed"].as_f64().unwrap() - 1.0 / std::f64::consts::TAU).abs() < 1e-12);
    let cubic = by_id("cubic-extremum-values");
    assert_eq!(cubic["printed"].as_f64(), Some(0.5935));
    assert!((cubic["computed"].as_f64().unwrap() - 0.646).abs() < 1e-3);
}

#[test]
fn loose_tolerance_still_passes() {
    let o = corput(&["--tol", "1e-2", "verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injected_fault_fails_with_named_check() {
    let o = corput(&["verify-all", "--inject-fault", "sublevel-equality"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("sublevel estimate is attained by T_n"), "{err}");
    assert!(stdout(&o).contains("FAIL "));

    let o = corput(&["verify-all", "--inject-fault", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_csv_contract() {
    let o = corput(&["constants", "--n-max", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,sublevel_C,vdc_C,corollary_C,arhipov_C,target_4n_over_e,target_4_over_e"
    );
    assert_eq!(lines.len(), 5);
    let row = |n: usize| -> Vec<f64> { lines[n - 1].split(',').map(|x| x.parse().unwrap()).collect() };
    assert!((row(3)[2] - 3.174802).abs() < 1e-6);
    assert!((row(2)[3] - 4.0).abs() < 1e-12);
    assert!(text.ends_with("\r\n"));
}

#[test]
fn integrate_reference_quadratic() {
    let doc = json(&["integrate", "--poly", "0,0,0.5", "--from", "-2", "--to", "2"]);
    assert!((doc["results"]["modulus"].as_f64().unwrap() - 3.33346).abs() < 1e-4);
}

#[test]
fn sublevel_equality_case() {
    let doc = json(&["sublevel", "--cheb", "3", "--alpha", "1", "--lambda", "auto"]);
    let r = &doc["results"];
    assert!((r["measure"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((r["bound"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!(r["margin"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn search_cubic_ratio() {
    let doc = json(&["search-cubic"]);
    assert!((doc["results"]["ratio"].as_f64().unwrap() + 0.3547).abs() < 1e-3);
}

#[test]
fn conjecture_value() {
    let doc = json(&["conjecture-n2"]);
    assert!((doc["results"]["value"].as_f64().unwrap() - 3.3643).abs() < 5e-4);
}

#[test]
fn divdiff_mvt_and_rl_audit_run() {
    let doc = json(&["divdiff", "--n", "3", "--poly", "1,0,0,2"]);
    assert!((doc["results"]["divided_difference"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((doc["results"]["node_weight_sum"].as_f64().unwrap() - 4.0).abs() < 1e-12);

    let doc = json(&[
        "mvt", "--weight", "2,-1", "--phase", "0,4", "--from", "0", "--to", "1.5",
    ]);
    assert!(doc["results"]["residual"].as_f64().unwrap() < 1e-9);

    let doc = json(&["rl-audit"]);
    assert_eq!(doc["discrepancies"][0]["violated"], Value::Bool(true));
}

#[test]
fn json_round_trips_and_is_reproducible() {
    let args = [
        "divdiff",
        "--n",
        "4",
        "--probe-trials",
        "200",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let a = stdout(&corput(&args));
    let b = stdout(&corput(&args));
    assert_eq!(a, b);
    let parsed: Value = serde_json::from_str(&a).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, a);
    let reparsed: Value = serde_json::from_str(&again).unwrap();
    assert_eq!(parsed, reparsed);

    let csv = ["constants", "--n-max", "12", "--format", "csv"];
    assert_eq!(stdout(&corput(&csv)), stdout(&corput(&csv)));
}

#[test]
fn human_output_carries_every_json_number() {
    for args in [
        vec!["integrate", "--poly", "0,-1,0,0.1666", "--from", "-3", "--to", "3"],
        vec![
            "sublevel", "--poly", "-0.5,0,1", "--from", "-2", "--to", "2", "--alpha", "0.25",
        ],
        vec!["constants", "--n-max", "4"],
    ] {
        let doc = json(&args);
        let human = stdout(&corput(&args));
        let mut nums = Vec::new();
        numbers(&doc["results"], &mut nums);
        numbers(&doc["discrepancies"], &mut nums);
        for n in nums {
            assert!(human.contains(&n), "{args:?}: {n} missing from human output");
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = corput(&["constants", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 10);

    let bad = dir.path().join("missing").join("x.csv");
    let o = corput(&["constants", "--out", bad.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["--bogus", "verify-all"],
        vec!["integrate", "--poly", "0,1", "--from", "2", "--to", "1"],
        vec!["integrate", "--poly", "0,x", "--from", "0", "--to", "1"],
        vec!["--tol", "0", "verify-all"],
        vec!["--tol", "-1e-3", "verify-all"],
        vec!["--grid", "1", "verify-all"],
        vec!["constants", "--n-max", "1"],
        vec!["sublevel", "--alpha", "1"],
        vec!["divdiff", "--nodes", "0.1,0.1"],
    ] {
        let o = corput(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}
