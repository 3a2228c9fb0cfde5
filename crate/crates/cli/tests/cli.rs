use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_multicrit"));
    c.env_remove("MULTICRIT_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Splits a CSV output into its JSON header and data records.
fn parse_csv(text: &str) -> (Value, Vec<Vec<String>>) {
    let (first, rest) = text.split_once('\n').unwrap();
    let header: Value = serde_json::from_str(first.strip_prefix("# ").expect("header line")).unwrap();
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn params_are_exact() {
    let o = run(&["params", "--kind", "odd", "--n", "2", "--theta", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["thetas"][2], "-1/9");
    assert_eq!(v["result"]["b"], "16/9");
    let o = run(&["params", "--kind", "oe", "--n", "2", "--theta", "7/3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["thetas"][1], "-7/12");
}

#[test]
fn dist_table_tail() {
    let o = run(&["dist-table", "--order", "3", "--s-from", "-4", "--s-to", "2", "--step", "0.5"]);
    assert!(o.status.success());
    let (_, rows) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 13);
    let last = &rows[12];
    assert_eq!(last[0], "2.0");
    assert!(last[1].parse::<f64>().unwrap() >= 0.999);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn zero_theta_gap_is_one() {
    let o = run(&["gap", "--kind", "oe", "--n", "1", "--theta", "0", "--from", "0", "--to", "3"]);
    assert!(o.status.success());
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header["conventions"]["half_integer_encoding"], "site m stands for k = m + 1/2");
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[1] == "1.0"));
}

#[test]
fn gap_matches_length_for_odd_kind() {
    let a = run(&["gap", "--n", "2", "--theta", "0.6", "--to", "6"]);
    let b = run(&["gap", "--n", "2", "--theta", "0.6", "--to", "6", "--stat", "length"]);
    let (_, ra) = parse_csv(&stdout(&a));
    let (_, rb) = parse_csv(&stdout(&b));
    for (x, y) in ra.iter().zip(&rb) {
        let (x, y): (f64, f64) = (x[1].parse().unwrap(), y[1].parse().unwrap());
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["gap", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["gap", "--from", "4", "--to", "1"]).status.code(), Some(64));
    assert_eq!(run(&["cdf", "--step", "0"]).status.code(), Some(64));
    assert_eq!(run(&["params", "--theta", "abc"]).status.code(), Some(64));
    assert_eq!(run(&["params", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["params", "--theta=-1"]).status.code(), Some(2));
    assert_eq!(run(&["dist-table", "--s-from", "-30", "--s-to", "-29"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "--only", "four-way", "--n", "2", "--kind", "odd", "--theta", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["all_passed"], true);
    assert!(v["result"]["checks"][0]["details"][0]["length_chain_spread"].as_f64().unwrap() < 1e-9);

    let o = run(&["verify", "--only", "scaling-disambiguation"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let check = &v["result"]["checks"][0];
    assert_eq!(check["details"]["lattice_winner"], "theta-over-d");
    assert_eq!(o.status.code(), Some(if check["passed"] == true { 0 } else { 2 }));

    assert_eq!(run(&["verify", "--only", "nonsense"]).status.code(), Some(64));
}

#[test]
fn output_directory_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("MULTICRIT_OUT_DIR", dir.path())
        .args(["gap", "--theta", "2", "--to", "4"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("gap.csv")).unwrap();
    assert!(text.starts_with("# {"));

    let target = dir.path().join("nested/params.json");
    let o = run(&["params", "--out", target.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["header"]["command"], "params");
}

fn sample_to(path: &Path, threads: &str) -> Vec<u8> {
    let o = run(&[
        "sample", "--theta", "2", "--n", "2", "--kind", "oe", "--count", "300", "--seed", "9",
        "--partitions", "--threads", threads, "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn sampling_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = sample_to(&dir.path().join("a.csv"), "1");
    let b = sample_to(&dir.path().join("b.csv"), "1");
    let c = sample_to(&dir.path().join("c.csv"), "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let (header, rows) = parse_csv(std::str::from_utf8(&a).unwrap());
    assert_eq!(header["config"]["diagnostics"]["leaked"], 0);
    assert_eq!(rows.len(), 300);
    for r in rows {
        let parts: Vec<usize> = if r[4].is_empty() {
            Vec::new()
        } else {
            r[4].split(',').map(|p| p.parse().unwrap()).collect()
        };
        assert_eq!(parts.iter().sum::<usize>().to_string(), r[3]);
        assert_eq!(parts.len().to_string(), r[2]);
    }
}

#[test]
fn limit_shape_comparison() {
    let o = run(&["limit-shape", "--kind", "odd", "--n", "1", "--grid-step", "0.25", "--compare-theta", "100"]);
    assert!(o.status.success());
    let (_, rows) = parse_csv(&stdout(&o));
    for r in rows {
        let u: f64 = r[0].parse().unwrap();
        let diff: f64 = r[5].parse().unwrap();
        if u.abs() < 1.8 {
            assert!(diff < 0.05, "{r:?}");
        }
    }
}

#[test]
fn toeplitz_check_with_monte_carlo() {
    let o = run(&["toeplitz-check", "--theta", "0.6", "--from", "1", "--to", "3", "--samples", "20000", "--seed", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["max_difference"].as_f64().unwrap() < 1e-9);
    for row in v["result"]["rows"].as_array().unwrap() {
        let mc = &row["monte_carlo"];
        let z = (mc["estimate"].as_f64().unwrap() - row["toeplitz_f"].as_f64().unwrap()).abs()
            / mc["std_error"].as_f64().unwrap();
        assert!(z < 4.0, "{row}");
    }
}

#[test]
fn edge_cdf_table() {
    let o = run(&["cdf", "--theta", "400", "--s-from", "-2", "--s-to", "2", "--step", "1"]);
    assert!(o.status.success());
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header["conventions"]["scaling"], "derived");
    for r in rows {
        let (g, f): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((g - f).abs() <= 0.03, "{r:?}");
    }
}
