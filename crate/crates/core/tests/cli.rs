use std::process::{Command, Output};

use spherelab::manifest::RunManifest;

fn spherelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherelab")).args(args).output().expect("spawn spherelab")
}

#[test]
fn list_names_every_experiment() {
    let out = spherelab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in spherelab::experiments::names() {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn run_writes_reproducible_manifest_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let plots = dir.path().join("plots");
    for path in [&a, &b] {
        let out = spherelab(&[
            "run",
            "exp_functional_equation",
            "--seed",
            "42",
            "--out",
            path.to_str().unwrap(),
            "--plot-dir",
            plots.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let load = |p: &std::path::Path| RunManifest::from_json(&std::fs::read_to_string(p).unwrap()).unwrap();
    let (ma, mb) = (load(&a), load(&b));
    assert!(ma.all_passed());
    assert_eq!(ma.reports.len(), 1);
    assert_eq!(ma.canonical_json().unwrap(), mb.canonical_json().unwrap());
    assert!(std::fs::read_dir(&plots).unwrap().count() > 0);
}

#[test]
fn unknown_experiment_is_usage_error() {
    let out = spherelab(&["run", "exp_does_not_exist"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sample_prints_csv() {
    let out = spherelab(&["sample", "--family", "gaussian:sigma=1", "--m", "5", "--n", "3", "--seed", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,x3");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.split(',').all(|v| v.parse::<f64>().is_ok())));

    let again = spherelab(&["sample", "--family", "gaussian:sigma=1", "--m", "5", "--n", "3", "--seed", "7"]);
    assert_eq!(text.as_bytes(), &again.stdout[..]);
}

#[test]
fn bad_family_is_usage_error() {
    let out = spherelab(&["sample", "--family", "cauchy:scale=1"]);
    assert_eq!(out.status.code(), Some(2));
}
