use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_towerseq");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("TOWERSEQ_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_opening() {
    let o = run(&["enumerate", "--count", "11", "--format", "csv"]);
    assert!(o.status.success());
    let exprs: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(
        exprs,
        ["(1/1)", "(2/1)", "(1/2)", "(3/1)", "(1/3)", "(4/1)", "(3/2)", "(2/3)", "(1/4)", "(5/1)", "(1/5)"]
    );
}

#[test]
fn enumerate_nothing() {
    let o = run(&["enumerate", "--count", "0"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn enumerate_through_weight_nine() {
    let o = run(&["enumerate", "--max-weight", "9", "--format", "jsonl"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last: Vec<&str> = lines[lines.len() - 4..]
        .iter()
        .map(|v| v["expr"].as_str().unwrap())
        .collect();
    assert_eq!(
        last,
        ["(2/1)^[(2/1)^(1/2)]", "(1/2)^[(2/1)^(1/2)]", "(2/1)^[(1/2)^(1/2)]", "(1/2)^[(1/2)^(1/2)]"]
    );
    assert!(lines.iter().all(|v| v["weight"].as_u64().unwrap() <= 9));
    let keys: Vec<&String> = lines[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
}

#[test]
fn enumerate_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c.ckpt");
    let ckpt = ckpt.to_str().unwrap();
    let first = run(&["enumerate", "--count", "40", "--checkpoint", ckpt]);
    let second = run(&["enumerate", "--count", "30", "--checkpoint", ckpt]);
    let whole = run(&["enumerate", "--count", "70"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(stdout(&first) + &stdout(&second), stdout(&whole));
}

#[test]
fn corrupt_checkpoint_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c.ckpt");
    std::fs::write(&ckpt, "towerseq-checkpoint v1\nsha256 00\n{}\n").unwrap();
    let o = run(&["enumerate", "--count", "1", "--checkpoint", ckpt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt"));
}

#[test]
fn eval_digits() {
    let o = run(&["eval", "(2/1)^[(2/1)^(1/2)]", "--digits", "30"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.665144142690225188650297249873");
    let o = run(&["eval", "(1/2)", "--digits", "3"]);
    assert_eq!(stdout(&o).trim(), "0.500");
}

#[test]
fn eval_rejects_bad_expression() {
    let o = run(&["eval", "(0/1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "precision_cap = 10\n").unwrap();
    let o = Command::new(BIN)
        .args(["enumerate", "--count", "1"])
        .env("TOWERSEQ_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["enumerate", "--count", "1", "--precision-cap", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["enumerate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_sets_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "format = \"jsonl\"\n").unwrap();
    let o = Command::new(BIN)
        .args(["enumerate", "--count", "1"])
        .env("TOWERSEQ_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(
        stdout(&o).trim(),
        r#"{"index":1,"weight":2,"expr":"(1/1)","value":"1","exact":true}"#
    );
}

#[test]
fn nested_straddle_trace() {
    let o = run(&["nested", "--source", "straddle", "--a", "0", "--b", "2", "--depth", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], ["0", "1", "1/2", "2", "3/2"]);
    assert_eq!(rows[4], ["4", "9", "5/6", "10", "7/6"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("element 1 of the Calkin-Wilf"));
}

#[test]
fn nested_rejects_empty_interval() {
    let o = run(&["nested", "--source", "calkin-wilf", "--a", "1", "--b", "0", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diagonal_table_and_profile() {
    let o = run(&["diagonal", "--count", "5", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let a: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(a, ["0", "0", "0", "0", "3"]);
    let o = run(&["diagonal", "--count", "10", "--profile"]);
    let out = stdout(&o);
    let series: Vec<&str> = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(series[0], "0.1");
    assert_eq!(series[9], "0.0000000001");
    let o = run(&["diagonal", "--count", "3", "--rule", "0123456789"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diagonal_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v.txt");
    std::fs::write(&f, "0.123\n(2/1)^(1/2)\n0.555\n").unwrap();
    let o = run(&["diagonal", "--source", "file", "--file", f.to_str().unwrap(), "--count", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("0.554"));
}

#[test]
fn approx_exact_target() {
    let o = run(&["approx", "--target", "2", "--max-weight", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(2/1) index 2 weight 3 error <= 0");
    let o = run(&["approx", "--target", "e", "--max-weight", "8", "--profile"]);
    let out = stdout(&o);
    assert!(out.starts_with("weight,expr,error_upper_bound\n"));
    assert_eq!(out.lines().count(), 8);
}

#[test]
fn verify_prefix_reports_divergence() {
    let o = run(&["verify-prefix"]);
    let out = stdout(&o);
    assert!(out.starts_with("match: "));
    assert!(out.contains("first divergence at 44: expected (2/1)^(1/4), found (2/1)^(2/3)"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_prefix_against_custom_reference() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ref.txt");
    std::fs::write(&f, "# weight 2\n(1/1)\n(2/1)\n(1/2)\n").unwrap();
    let o = run(&["verify-prefix", "--reference", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "match: 3/3");
}
