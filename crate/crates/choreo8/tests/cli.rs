//! End-to-end checks of the command-line binary: exit codes, output file
//! layout, determinism, and a few numbers read back from the artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_choreo8")
}

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("choreo8-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_writes_csv_report_and_manifest() {
    let dir = tmpdir("simulate");
    let out = dir.join("orbit");
    let o = run(&[
        "simulate",
        "--grid-step-deg",
        "30",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(dir.join("orbit.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 14, "header + 13 grid rows");
    assert!(lines[0].starts_with("tau_deg,x1,y1"));

    let report = json(&dir.join("orbit.report.json"));
    let e0 = report["integrals_initial"]["energy"].as_f64().unwrap();
    let e1 = report["integrals_final"]["energy"].as_f64().unwrap();
    assert!((e1 - e0).abs() < 1e-12, "energy drift {}", (e1 - e0).abs());
    assert!(report["closure_deviation"]["position"].as_f64().unwrap() < 1e-9);

    let manifest = json(&dir.join("orbit.manifest.json"));
    assert_eq!(manifest["command"], "simulate");
    assert!(manifest["outputs"].as_array().unwrap().len() >= 2);
}

#[test]
fn simulate_half_period_ends_on_axis_crossing() {
    let dir = tmpdir("half");
    let out = dir.join("half");
    let o = run(&[
        "simulate",
        "--grid-step-deg",
        "90",
        "--tau-end-deg",
        "180",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.join("half.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols[0], 180.0);
    // tau = 180 deg mirrors tau = 0: particle 1 back on the x axis
    assert!(cols[2].abs() < 1e-9, "y1(180 deg) = {}", cols[2]);
}

#[test]
fn events_check_passes() {
    let dir = tmpdir("events");
    let out = dir.join("events");
    let o = run(&["events", "--check", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.join("events.json"));
    assert_eq!(v["events"].as_array().unwrap().len(), 12);
}

#[test]
fn bad_tolerance_is_a_validation_error() {
    let dir = tmpdir("badtol");
    let out = dir.join("x");
    let o = run(&[
        "--tol",
        "1e-3",
        "simulate",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.join("x.csv").exists());
}

#[test]
fn fit_reproduces_the_one_harmonic_separation() {
    let dir = tmpdir("fit");
    let out = dir.join("r23");
    let o = run(&[
        "fit",
        "r23",
        "--multipliers",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.join("r23.json"));
    let c0 = v["fit"]["c0"].as_f64().unwrap();
    let c1 = v["fit"]["coeffs"][0].as_f64().unwrap();
    assert!((c0 - 0.928549).abs() < 1e-4, "c0 = {c0}");
    assert!((c1 + 0.451923).abs() < 1e-4, "c1 = {c1}");
}

#[test]
fn outputs_are_deterministic() {
    let dir = tmpdir("determinism");
    for tag in ["a", "b"] {
        let out = dir.join(tag);
        let o = run(&[
            "simulate",
            "--grid-step-deg",
            "10",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let o = run(&["compare", "--out", dir.join(format!("cmp-{tag}")).to_str().unwrap()]);
        assert!(o.status.success());
    }
    // manifests carry wall time and are excluded from the comparison
    for (x, y) in [("a.csv", "b.csv"), ("a.report.json", "b.report.json"), ("cmp-a.json", "cmp-b.json")] {
        let x = std::fs::read(dir.join(x)).unwrap();
        let y = std::fs::read(dir.join(y)).unwrap();
        assert_eq!(x, y, "artifacts differ between identical runs");
    }
}

#[test]
fn curves_emits_samples_and_report() {
    let dir = tmpdir("curves");
    let out = dir.join("lb");
    let o = run(&[
        "curves",
        "lb",
        "--samples",
        "16",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("lb.csv")).unwrap();
    assert_eq!(csv.lines().count(), 18, "header + 17 samples");
    let report = json(&dir.join("lb.report.json"));
    assert_eq!(report["tangent_at_origin_deg"].as_f64().unwrap(), 45.0);
}
