use assert_cmd::Command;
use predicates::prelude::*;
use std::path::Path;

fn mmpe() -> Command {
    Command::cargo_bin("mmpe").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = mmpe().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new("tests/golden").join(name)).unwrap()
}

#[test]
fn gaussian_curve_is_one_over_one_plus_snr() {
    let csv = stdout_of(&["curve", "--preset", "gaussian", "--p", "2", "--snr", "0:0.5:8"]);
    let snr = column(&csv, "snr");
    let value = column(&csv, "value");
    assert_eq!(snr.len(), 17);
    for (s, v) in snr.iter().zip(&value) {
        assert!((v - 1.0 / (1.0 + s)).abs() < 1e-9, "snr {s}: {v}");
    }
    assert_eq!(csv, golden("curve_gaussian.csv"));
}

#[test]
fn bpsk_columns_are_nonincreasing_in_snr() {
    let csv = stdout_of(&["curve", "--preset", "bpsk", "--p", "1,2,4", "--snr", "0:0.25:4"]);
    let p = column(&csv, "p");
    let v = column(&csv, "value");
    for order in [1.0, 2.0, 4.0] {
        let col: Vec<f64> = p.iter().zip(&v).filter(|(q, _)| **q == order).map(|(_, v)| *v).collect();
        assert_eq!(col.len(), 17);
        assert!(col.windows(2).all(|w| w[1] <= w[0] + 1e-9), "p = {order}: {col:?}");
    }
    assert_eq!(csv, golden("curve_bpsk.csv"));
}

#[test]
fn figure_golden() {
    assert_eq!(stdout_of(&["figure", "fig1b"]), golden("fig1b.csv"));
}

#[test]
fn monte_carlo_output_is_byte_identical_for_a_seed() {
    let args = ["curve", "--dist-file", "tests/golden/tri2.txt", "--p", "1.5,3", "--snr", "1", "--samples", "4000", "--seed", "11"];
    let a = stdout_of(&args);
    assert_eq!(a, stdout_of(&args));
    assert!(a.lines().nth(1).unwrap().contains("monte_carlo"));
    let mut other = args;
    other[10] = "12";
    assert_ne!(a, stdout_of(&other));
}

#[test]
fn out_flag_writes_the_same_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    mmpe().args(["curve", "--preset", "gaussian", "--p", "2", "--snr", "0:0.5:8", "--out"]).arg(&path).assert().success();
    assert_eq!(std::fs::read_to_string(path).unwrap(), golden("curve_gaussian.csv"));
}

#[test]
fn bounds_rows_carry_their_grid_point() {
    let csv = stdout_of(&["curve", "--preset", "bpsk", "--p", "2", "--snr", "1", "--bounds"]);
    assert!(csv.starts_with("snr,p,name,inputs,bound,direction,truth,margin\n"));
    assert!(csv.lines().count() > 5);
}

#[test]
fn unknown_preset_is_a_usage_error() {
    mmpe()
        .args(["curve", "--preset", "qam", "--p", "2", "--snr", "1"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("bpsk").and(predicate::str::contains("pmone_vector")));
}

#[test]
fn bad_grids_are_usage_errors() {
    for snr in ["1:0:2", "2,1", "x", "", "1:2"] {
        mmpe().args(["curve", "--preset", "bpsk", "--p", "2", "--snr", snr]).assert().code(2);
    }
    mmpe().args(["figure", "fig9"]).assert().code(2).stderr(predicate::str::contains("fig4b"));
    mmpe().args(["curve", "--preset", "bpsk", "--dist-file", "x", "--p", "2", "--snr", "1"]).assert().code(2);
    mmpe().args(["curve", "--dist-file", "tests/golden/missing.txt", "--p", "2", "--snr", "1"]).assert().code(2);
}

#[test]
fn verify_fast_passes_and_injected_fault_fails() {
    let out = mmpe().args(["verify", "--suite", "fast"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 25);
    assert!(!text.contains("FAIL"));
    mmpe()
        .args(["verify", "--suite", "fast", "--inject-cp", "0.5"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("FAIL bounds::dominance[scpp]"));
}
