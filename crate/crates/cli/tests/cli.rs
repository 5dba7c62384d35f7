//! End-to-end runs of the `gconc` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gconc::random::{random_density, seeded_rng};
use gconc::state::max_entangled;
use gconc::{DensityMatrix, Dim};
use gconc_cli::input::{mixed_to_json, pure_to_json};

fn gconc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gconc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn json_field(out: &Output, key: &str) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v[key].clone()
}

fn dim(d: usize) -> Dim {
    Dim::new(d).unwrap()
}

#[test]
fn bound_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(dir.path(), "phi.json", &pure_to_json(&max_entangled(dim(3))));
    let out = gconc(&["bound", phi.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!((json_field(&out, "final_bound").as_f64().unwrap() - 1.0).abs() < 1e-10);

    let mixed = write(dir.path(), "mixed.json", &mixed_to_json(&DensityMatrix::maximally_mixed(dim(3))));
    let out = gconc(&["bound", mixed.to_str().unwrap(), "--lu-opt", "--nf"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json_field(&out, "final_bound").as_f64().unwrap(), 0.0);

    let iso = write(dir.path(), "iso.json", &mixed_to_json(&DensityMatrix::isotropic(dim(3), 0.7).unwrap()));
    let out = gconc(&["bound", iso.to_str().unwrap(), "--text"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("full Schmidt rank certified"));
    let out = gconc(&["bound", iso.to_str().unwrap()]);
    assert!(json_field(&out, "final_bound").as_f64().unwrap() >= 0.2 - 1e-9);
}

#[test]
fn input_errors_exit_2_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.json", "{not json", "malformed input"),
        ("shape.json", r#"{"d": 2, "re": [[1.0]]}"#, "4×4"),
        ("trace.json", r#"{"d": 2, "re": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0.5]]}"#, "trace"),
        ("herm.json", r#"{"d": 2, "re": [[0.25,0.1,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]}"#, "ermitian"),
        ("psd.json", r#"{"d": 2, "re": [[0.5,0,0,0],[0,0.5,0,0],[0,0,-0.25,0],[0,0,0,0.25]]}"#, "positive"),
        ("norm.json", r#"{"pure": {"d": 2, "re": [[1,0],[0,1]]}}"#, "normalized"),
    ];
    for (name, contents, needle) in cases {
        let path = write(dir.path(), name, contents);
        let out = gconc(&["bound", path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{name}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{name}: {err}");
    }
    assert_eq!(code(&gconc(&["bound", dir.path().join("missing.json").to_str().unwrap()])), 2);

    let big = write(dir.path(), "big.json", &mixed_to_json(&DensityMatrix::maximally_mixed(dim(3))));
    assert_eq!(code(&gconc(&["bound", big.to_str().unwrap(), "--max-dim", "2"])), 2);
    assert_eq!(code(&gconc(&["distance", big.to_str().unwrap(), "--schmidt-number", "3"])), 2);
    assert_eq!(code(&gconc(&["cluster", "--qubits", "5"])), 2);
    assert_eq!(code(&gconc(&["curve", "--d", "4", "--samples", "1"])), 2);
    assert_eq!(code(&gconc(&["bound"])), 2);
    assert_eq!(code(&gconc(&["no-such-command"])), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let rho = random_density(dim(3), 3, &mut seeded_rng(9, 0));
    let path = write(dir.path(), "rho.json", &mixed_to_json(&rho));
    let args = ["bound", path.to_str().unwrap(), "--lu-opt", "--nf", "--phases", "--seed", "5", "--upper-trials", "2"];
    let first = gconc(&args);
    let second = gconc(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(json_field(&first, "timings").is_null());

    let timed = gconc(&[&args[..], &["--timings"]].concat());
    assert!(json_field(&timed, "timings").is_object());

    let bound = json_field(&first, "final_bound").as_f64().unwrap();
    let upper = json_field(&first, "upper_bound").as_f64().unwrap();
    assert!(bound <= upper + 1e-6);
}

#[test]
fn curve_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let out = gconc(&["curve", "--d", "4", "--samples", "21", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 22);
    assert!(csv.lines().last().unwrap().starts_with("1,1,1,1,"));

    let unwritable = dir.path().join("no-dir").join("fig.csv");
    assert_eq!(code(&gconc(&["curve", "--d", "4", "--out", unwritable.to_str().unwrap()])), 2);

    let inline = gconc(&["curve", "--d", "3", "--samples", "4"]);
    assert_eq!(stdout(&inline).lines().count(), 5);
}

#[test]
fn cluster_thresholds() {
    let out = gconc(&["cluster", "--qubits", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = |label: &str| -> Vec<String> {
        text.lines().find(|l| l.starts_with(label)).unwrap().split(',').map(str::to_string).collect()
    };
    let ac = row("(AC)(BD)");
    assert_eq!(ac[1], "4");
    assert!((ac[5].parse::<f64>().unwrap() - 4.0 / 15.0).abs() < 1e-9);
    assert!((ac[6].parse::<f64>().unwrap() - 8.0 / 13.0).abs() < 1e-12);
    let ab = row("(AB)(CD)");
    assert_eq!((ab[1].as_str(), ab[3].as_str(), ab[5].as_str()), ("2", "false", "0"));

    let out = gconc(&["cluster", "--qubits", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let best = v["rows"].as_array().unwrap().iter().map(|r| r["threshold"]["w_star"].as_f64().unwrap()).fold(0.0, f64::max);
    assert!((best - 8.0 / 63.0).abs() < 1e-9);

    let text = stdout(&gconc(&["cluster", "--qubits", "4"]));
    assert!(text.contains("0.266667") && text.contains("not applicable"));
}

#[test]
fn distance_prints_a_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "phi.json", &pure_to_json(&max_entangled(dim(4))));
    let out = gconc(&["distance", path.to_str().unwrap(), "--schmidt-number", "3"]);
    assert_eq!(code(&out), 0);
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!(value > 0.0);
}

#[test]
fn verify_suites() {
    let out = gconc(&["verify", "--suite", "appendixC", "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("PASS appendixC: 20 checks"));
    let out = gconc(&["verify", "--suite", "sandwich", "--samples", "6", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gconc(&["verify", "--suite", "curve"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    // an empty run certifies nothing
    let out = gconc(&["verify", "--suite", "appendixC", "--samples", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("FAIL"));
}
