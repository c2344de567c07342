//! Command-line behaviour: exit codes, output files and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperplane"))
        .args(args)
        .env_remove("HYPERPLANE_SEED")
        .output()
        .expect("binary runs")
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn enumerate_prints_counts() {
    let out = run(&["enumerate", "--n-max", "2", "--p-max", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,count"));
    // the bare triangle, and no triangulation of a 1-gon without inner vertices
    assert!(text.lines().any(|l| l == "0,3,1"));
    assert!(text.lines().any(|l| l == "0,1,0"));
}

#[test]
fn weight_requires_exactly_one_form() {
    let both = run(&["peel", "--lambda-ratio", "0.9", "--n", "5", "--rmax", "2"]);
    assert_eq!(both.status.code(), Some(2));
    let neither = run(&["peel", "--rmax", "2"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn peel_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let common = ["peel", "--lambda-ratio", "0.9", "--rmax", "4", "--replicas", "20", "--seed", "7"];
    let out_a = run(&[&common[..], &["--out", a.to_str().unwrap(), "--threads", "1"]].concat());
    let out_b = run(&[&common[..], &["--out", b.to_str().unwrap()]].concat());
    assert!(out_a.status.success() && out_b.status.success());
    let files = read_dir_sorted(&a);
    assert_eq!(files.len(), 21);
    assert!(files.iter().any(|(n, _)| n == "run.json"));
    assert_eq!(files, read_dir_sorted(&b));
}

#[test]
fn quick_validation_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["validate", "--quick", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reports = hyperplane::harness::load_reports(&dir.path().join("reports.json")).unwrap();
    assert!(!reports.is_empty());
    assert!(hyperplane::harness::suite_passed(&reports));
}

#[test]
fn transform_table_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["continuum", "--kind", "transform", "--r", "0.5,1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("transform_table.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("r,lambda,mu,transform_value"));
    assert!(text.lines().count() > 2);
}

#[test]
fn built_maps_pass_their_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "build-map", "--lambda-ratio", "0.9", "--rmax", "4", "--replicas", "3", "--seed", "3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("oracle.json").exists());
    assert!(dir.path().join("map_00000.txt").exists());
}
