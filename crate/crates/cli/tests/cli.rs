use std::process::{Command, Output};

use serde_json::Value;

fn kickband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kickband"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn monodromy_reports_pure_identity() {
    let out = kickband(&["monodromy", "--p", "2", "--q", "5", "--kappa", "1", "--grid", "256"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["is_pure"], Value::Bool(true));
    assert_eq!(v["permutation"], serde_json::json!([1, 2, 3, 4, 5]));
    for key in ["min_discriminant", "near_degeneracies", "refinements"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn gauss_matrix_for_half_flux_is_the_swap() {
    let out = kickband(&["gauss-matrix", "--p", "1", "--q", "2"]);
    assert!(out.status.success());
    let m = &json_stdout(&out)["matrix"];
    let re = |r: usize, c: usize| m[r][c][0].as_f64().unwrap();
    assert!(re(0, 0).abs() < 1e-14 && (re(0, 1) - 1.0).abs() < 1e-14);
}

#[test]
fn butterfly_csv_has_odd_denominator_parity() {
    let out = kickband(&["butterfly", "--alphas", "1/3,2/5", "--kind", "harper", "--lambda", "1", "--grid", "256"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,kind,lo,hi"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.iter().filter(|r| r[1] == "3").count(), 3);
    assert_eq!(rows.iter().filter(|r| r[1] == "5").count(), 5);
}

#[test]
fn validation_errors_exit_2_with_json() {
    let out = kickband(&["spectrum", "--p", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stderr(&out)["error"], "NOT_COPRIME");

    let out = kickband(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let out = kickband(&["puiseux", "--example", "cusp", "--input", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_errors_exit_3_with_json() {
    // the Harper polynomial is not periodic under t → t + 1/q, so the loop does not close
    let out = kickband(&["monodromy", "--kind", "harper", "--p", "1", "--q", "3", "--grid", "64"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_stderr(&out)["error"], "CLOSURE_VIOLATION");
}

#[test]
fn puiseux_example_branches() {
    let out = kickband(&["puiseux", "--example", "cusp", "--depth", "3"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let branches = v["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 2);
    assert!(branches.iter().all(|b| b["ramification"] == 2));
    assert_eq!(branches[0]["terms"][0]["exponent"], "3/2");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("kickband-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bands.csv");
    let args = ["bands", "--p", "2", "--q", "5", "--kappa", "0.3", "--grid", "128"];
    let direct = kickband(&args);
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    assert!(kickband(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
