//! End-to-end runs of the `dmfb-dilute` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmfb-dilute")).args(args).env_remove("DMFB_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> Output {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    o
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(&ok(args))).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

#[test]
fn sparse_enumeration_replays_three_position_table() {
    let o = ok(&["enumerate", "--target", "87/128", "--epsilon", "7%", "--positions", "1,3,6"]);
    let out = stdout(&o);
    assert!(out.starts_with("vector,gray_position,produced_cf_x2n,cf_error_x2n,abs_error_x2n,within_tolerance\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 8);
    let expected = [
        ("+0+00+", 85.71, 1.29),
        ("+0+00-", 88.56, 1.56),
        ("+0-00+", 85.47, 1.53),
        ("+0-00-", 88.36, 1.36),
        ("-0+00+", 85.76, 1.24),
        ("-0+00-", 88.61, 1.61),
        ("-0-00+", 85.52, 1.48),
        ("-0-00-", 88.41, 1.41),
    ];
    for (v, cf, err) in expected {
        let row = rows.iter().find(|r| r[0] == v).unwrap_or_else(|| panic!("missing {v}"));
        assert_eq!(round2(row[2].parse().unwrap()), cf, "{v}");
        assert_eq!(round2(row[4].parse().unwrap()), err, "{v}");
        assert_eq!(row[5], "false");
    }
    // summaries never leak into the data stream
    assert!(!out.contains("rows:"));
    let diag = stderr(&o);
    assert!(diag.contains("rows: 8"));
    assert!(diag.contains("within tolerance: 0 of 8"));
}

#[test]
fn sweep_reports_global_maximum_at_both_complements() {
    let o = ok(&["sweep", "--accuracy", "7", "--epsilon", "7%"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 65);
    assert!(out.starts_with("numerator,accuracy,max_error_x2n,argmax_vector\n1,7,"));
    let diag = stderr(&o);
    assert!(diag.contains("max max_error_x2n: 4.12"), "{diag}");
    assert!(diag.contains("at numerators 63, 65"), "{diag}");
    for row in csv_rows(&out).iter().filter(|r| r[0] == "63" || r[0] == "65") {
        assert_eq!(row[3], "------");
    }
}

#[test]
fn dot_plan_has_expected_node_counts() {
    let dot = stdout(&ok(&["plan", "--target", "17/128", "--format", "dot"]));
    assert_eq!(dot.matches("class=\"mixsplit\"").count(), 7);
    assert_eq!(dot.matches("class=\"dispense\"").count(), 8);
}

#[test]
fn worst_case_json() {
    let v = json(&["worst-case", "--target", "87/128", "--epsilon", "0.07"]);
    assert_eq!(v["argmax_vector"], "-++-+-");
    assert_eq!(v["gray_position"], 57);
    assert_eq!(v["space"], 64);
    assert!((v["max_error_x2n"].as_f64().unwrap() - 1.977).abs() <= 1e-3);
}

#[test]
fn classify_marks_only_last_step() {
    let out = stdout(&ok(&["classify", "--target", "87/128", "--epsilon", "7%"]));
    let critical: Vec<_> = csv_rows(&out).into_iter().map(|r| r[3].clone()).collect();
    assert_eq!(critical, ["false", "false", "false", "false", "false", "true"]);
}

#[test]
fn plan_file_round_trip_matches_direct_target() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    ok(&["plan", "--target", "87/128", "--format", "json", "--output", plan.to_str().unwrap()]);
    let args = ["--epsilon", "7%", "--vector", "-++-+-"];
    let from_file = stdout(&ok(&[&["simulate", "--plan-file", plan.to_str().unwrap()][..], &args].concat()));
    let direct = stdout(&ok(&[&["simulate", "--target", "87/128"][..], &args].concat()));
    assert_eq!(from_file, direct);
}

#[test]
fn output_flag_writes_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("enum.csv");
    let o = ok(&["enumerate", "--target", "87/128", "--epsilon", "3%", "--output", path.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 65);
}

fn numbers(v: &serde_json::Value, out: &mut Vec<(String, f64)>, path: String) {
    match v {
        serde_json::Value::Number(n) => out.push((path, n.as_f64().unwrap())),
        serde_json::Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| numbers(x, out, format!("{path}[{i}]"))),
        serde_json::Value::Object(m) => m.iter().for_each(|(k, x)| numbers(x, out, format!("{path}.{k}"))),
        _ => {}
    }
}

fn assert_backends_agree(args: &[&str]) {
    let float = json(&[args, &["--backend", "float"]].concat());
    let exact = json(&[args, &["--backend", "rational"]].concat());
    let (mut a, mut b) = (Vec::new(), Vec::new());
    numbers(&float, &mut a, String::new());
    numbers(&exact, &mut b, String::new());
    assert_eq!(a.len(), b.len(), "{args:?}");
    assert!(!a.is_empty());
    for ((pa, x), (pb, y)) in a.iter().zip(&b) {
        assert_eq!(pa, pb);
        assert!((x - y).abs() <= 1e-12, "{args:?} {pa}: {x} vs {y}");
    }
}

#[test]
fn float_and_rational_backends_agree() {
    assert_backends_agree(&["simulate", "--target", "87/128", "--epsilon", "7%", "--vector", "-++-+-"]);
    assert_backends_agree(&["simulate", "--target", "683/1024", "--epsilon", "5%", "--vector", "+-0+-0+-+"]);
    assert_backends_agree(&["enumerate", "--target", "87/128", "--epsilon", "7%", "--format", "json"]);
    assert_backends_agree(&["enumerate", "--target", "5/16", "--epsilon", "3%", "--include-skip", "--format", "json"]);
    assert_backends_agree(&["worst-case", "--target", "41/128", "--epsilon", "7%"]);
    assert_backends_agree(&["classify", "--target", "17/128", "--epsilon", "7%", "--format", "json"]);
    assert_backends_agree(&["sweep", "--accuracy", "5", "--epsilon", "7%", "--format", "json"]);
}

#[test]
fn validation_failures_exit_with_status_one() {
    let cases: [&[&str]; 7] = [
        &["simulate", "--target", "87/129", "--epsilon", "7%"],
        &["simulate", "--target", "87/128", "--epsilon", "7%", "--vector", "00?+00"],
        &["simulate", "--target", "87/128", "--epsilon", "7%", "--vector", "000+0"],
        &["simulate", "--target", "87/128", "--epsilon", "100%"],
        &["worst-case", "--target", "87/128", "--epsilon", "1.5"],
        &["plan", "--target", "87/128", "--frobnicate"],
        &["enumerate", "--target", "87/128"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
    assert!(stderr(&run(cases[0])).contains("power of two"));
    assert!(stderr(&run(cases[5])).contains("--frobnicate"));
}

#[test]
fn search_space_guard_needs_force() {
    let o = run(&["worst-case", "--target", "1/33554432", "--epsilon", "7%"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--force"));
    assert!(stderr(&o).contains("2^24 = 16777216"));
}

#[test]
fn io_failures_exit_with_status_two() {
    let o = run(&["simulate", "--plan-file", "/nonexistent/plan.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["plan", "--target", "87/128", "--output", "/nonexistent/dir/plan.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "--accuracy", "6", "--epsilon", "5%"];
    let one = stdout(&ok(&[&args[..], &["--threads", "1"]].concat()));
    let four = Command::new(env!("CARGO_BIN_EXE_dmfb-dilute")).args(args).env("DMFB_THREADS", "4").output().unwrap();
    assert!(four.status.success());
    assert_eq!(one, stdout(&four));
}
