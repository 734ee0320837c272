//! End-to-end runs of the binary: output formats and exit codes.

use std::process::{Command, Output};

fn meroform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meroform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn series_j() {
    let o = meroform(&["series", "j", "--terms", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q^-1 + 744 + 196884*q + O(q^2)");
}

#[test]
fn series_delta_as_tsv() {
    let o = meroform(&["series", "Delta", "--terms", "4", "--format", "tsv"]);
    assert_eq!(stdout(&o), "1\t1\n2\t-24\n3\t252\n4\t-1472");
}

#[test]
fn classes() {
    let o = meroform(&["classes", "-D", "-3"]);
    assert_eq!(stdout(&o), "[1,1,1]");
    let o = meroform(&["classes", "-D", "-23"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = meroform(&["classes", "-D", "-12", "--all", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h"], 2);
    assert_eq!(v["forms"], serde_json::json!([[1, 0, 3], [2, 2, 2]]));
}

#[test]
fn classpoly() {
    let o = meroform(&["classpoly", "-D", "-23"]);
    assert_eq!(stdout(&o), "X^3 + 3491750*X^2 - 5151296875*X + 12771880859375");
}

fn fourier_rows(args: &[&str]) -> Vec<(u64, f64, f64)> {
    let o = meroform(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let err = if f[2] == "-inf" { 0.0 } else { 10f64.powf(f[2].parse().unwrap()) };
            (f[0].parse().unwrap(), f[1].parse().unwrap(), err)
        })
        .collect()
}

#[test]
fn fourier_table() {
    // −2⁸Δ/E4² = −256q + 129024q² + …
    let rows = fourier_rows(&["fourier", "-k", "2", "-D", "-3", "--rmax", "2"]);
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[0].0, rows[0].1), (0, 0.0));
    assert!((rows[1].1 + 256.0).abs() <= rows[1].2);
    assert!((rows[2].1 - 129024.0).abs() <= rows[2].2);

    let rows = fourier_rows(&["--prec", "40", "fourier", "-k", "6", "-D", "-3", "--rmax", "1"]);
    assert!((rows[1].1 + 0.286_311_721_167_287).abs() < 1e-15);
    assert!(rows[1].2 < 1e-30);
}

#[test]
fn direct_eval_json() {
    let o = meroform(&["--format", "json", "direct-eval", "-k", "6", "-D", "-3", "--z", "0.1,1.2", "--tol", "1e-14"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-14);
    assert!(v["re"].as_str().unwrap().parse::<f64>().is_ok());
}

#[test]
fn decompose_json_schema() {
    let o = meroform(&["--format", "json", "decompose", "-k", "2", "-D", "-3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["D"], -3);
    assert_eq!(v["remainder_zero"], true);
    // coordinates on {1, √3}
    assert_eq!(v["coeffs_H"], serde_json::json!([["-256/1", "0/1"]]));
    assert!(v["cusp_remainder"].as_array().unwrap().is_empty());
}

#[test]
fn hecke_combination_clears_the_cusp_part() {
    let o = meroform(&["--format", "json", "hecke", "-k", "6", "-D", "-3", "--lambda", "24,1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["remainder_zero"], true);
    assert_eq!(v["obstruction_passes"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classes", "-D", "-5"],
        vec!["decompose", "-k", "1", "-D", "-3"],
        vec!["--prec", "10", "decompose", "-k", "2", "-D", "-3"],
        vec!["--terms", "5", "decompose", "-k", "2", "-D", "-3"],
        vec!["--convention", "sideways", "decompose", "-k", "2", "-D", "-3"],
        vec!["series", "theta"],
        vec!["nonsense"],
    ] {
        assert_eq!(code(&meroform(&args)), 2, "{args:?}");
    }
}

#[test]
fn unreachable_tolerance_exits_3() {
    // the a-tail of a weight-4 sum cannot reach 10⁻¹⁰⁰
    let o = meroform(&["direct-eval", "-k", "2", "-D", "-3", "--z", "0.1,1.2", "--tol", "1e-100"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_appendix_subset_and_fault_injection() {
    let o = meroform(&["verify-appendix", "--only", "3,4,8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("3/3 checks passed"));
    let o = meroform(&["verify-appendix", "--only", "3,4,8", "--inject-fault"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("meroform-cli-test-{}.txt", std::process::id()));
    let o = meroform(&["classpoly", "-D", "-7", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "X + 3375");
    std::fs::remove_file(path).ok();
}
