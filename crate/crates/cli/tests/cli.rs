use std::f64::consts::PI;
use std::process::{Command, Output};

use qbrach_core::hermitian::optimal_hamiltonian;
use qbrach_core::linalg::state;
use qbrach_core::ComplexScalar;
use serde_json::Value;

fn qbrach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbrach"))
        .args(args)
        .env_remove("QBRACH_HBAR")
        .env_remove("QBRACH_TOLERANCES")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn entry(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn optimal_h_spin_flip() {
    let out = qbrach(&["optimal-h", "--psi-i", "1,0", "--psi-f", "0,1", "--omega", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    for key in ["command", "config", "inputs", "outputs", "checks"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    let h = &doc["outputs"]["hamiltonian"];
    let expected = [[(0.0, 0.0), (-0.5, 0.0)], [(-0.5, 0.0), (0.0, 0.0)]];
    for i in 0..2 {
        for j in 0..2 {
            let (re, im) = entry(&h[i][j]);
            assert!((re - expected[i][j].0).abs() < 1e-13 && (im - expected[i][j].1).abs() < 1e-13);
        }
    }
    let tau = doc["outputs"]["tau"].as_f64().unwrap();
    assert!((tau - PI).abs() < 1e-12);
}

#[test]
fn outputs_equal_library_values_bit_for_bit() {
    let out = qbrach(&["optimal-h", "--psi-i", "0.6,0.8i", "--psi-f", "1-2i,0.3", "--omega", "1.7"]);
    let doc = json(&out);
    let a = state(ComplexScalar::new(0.6, 0.0), ComplexScalar::new(0.0, 0.8));
    let b = state(ComplexScalar::new(1.0, -2.0), ComplexScalar::new(0.3, 0.0));
    let sol = optimal_hamiltonian(&a, &b, 1.7, 1.0).unwrap();
    assert_eq!(doc["outputs"]["tau"].as_f64().unwrap().to_bits(), sol.min_time.to_bits());
    let (re, im) = entry(&doc["outputs"]["hamiltonian"][0][1]);
    assert_eq!(re.to_bits(), sol.hamiltonian[(0, 1)].re.to_bits());
    assert_eq!(im.to_bits(), sol.hamiltonian[(0, 1)].im.to_bits());
}

#[test]
fn hbar_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qbrach"))
        .args(["min-time", "--psi-i", "1,0", "--psi-f", "0,1", "--omega", "1"])
        .env("QBRACH_HBAR", "2")
        .output()
        .unwrap();
    let doc = json(&out);
    assert_eq!(doc["config"]["hbar"].as_f64(), Some(2.0));
    assert!((doc["outputs"]["tau"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn spin_flip_sweep_is_monotone_and_vanishing() {
    let out = qbrach(&["--format", "csv", "pt-spinflip", "--omega", "1", "--alpha-grid", "0:1.5:0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,tau,tau_over_passage,cpt_distance"));
    let taus: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(taus.len(), 16);
    assert!(taus.windows(2).all(|w| w[1] < w[0]));
    assert!((taus[0] - PI).abs() < 1e-12);
    assert!(taus[15] < 0.05 * PI);
}

#[test]
fn verify_is_deterministic() {
    let first = qbrach(&["verify", "--seed", "42"]);
    let second = qbrach(&["verify", "--seed", "42"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let doc = json(&first);
    let checks = doc["checks"].as_object().unwrap();
    assert!(checks.len() >= 20);
    assert!(checks.values().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn verify_fails_loudly_under_impossible_tolerances() {
    let dir = std::env::temp_dir().join(format!("qbrach-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tight.json");
    std::fs::write(&path, r#"{"c_algebra": 1e-300}"#).unwrap();
    let out = qbrach(&["verify", "--tolerances", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["checks"]["c_algebra"]["pass"], Value::Bool(false));
}

#[test]
fn argument_errors_exit_two() {
    assert_eq!(qbrach(&["optimal-h", "--psi-i", "1", "--psi-f", "0,1", "--omega", "1"]).status.code(), Some(2));
    assert_eq!(qbrach(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qbrach(&["--hbar", "-1", "verify"]).status.code(), Some(2));
    assert_eq!(
        qbrach(&["pt-spinflip", "--omega", "1", "--alpha-grid", "1:0:0.1"]).status.code(),
        Some(2)
    );
}

#[test]
fn domain_errors_are_structured() {
    let out = qbrach(&["pt-eig", "--r", "2", "--s", "1", "--theta", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["error"]["code"], "BROKEN_PT");
    assert_eq!(doc["error"]["tag"], Value::Null);

    let out = qbrach(&["pt-eig", "--r", "1", "--s", "1", "--theta", "1.5707963267948966"]);
    let doc = json(&out);
    assert_eq!(doc["error"]["code"], "BROKEN_PT");
    assert_eq!(doc["error"]["tag"], "EXCEPTIONAL");

    let out = qbrach(&["optimal-h", "--psi-i", "1,0", "--psi-f", "2i,0", "--omega", "1"]);
    assert_eq!(json(&out)["error"]["code"], "PARALLEL_STATES");
    let out = qbrach(&["min-time", "--psi-i", "1,0", "--psi-f", "0,1", "--omega", "0"]);
    assert_eq!(json(&out)["error"]["code"], "BAD_GAP");
}

#[test]
fn trajectory_csv_schemas() {
    let out = qbrach(&[
        "--format", "csv", "pt-evolve", "--r", "0.5", "--s", "1", "--theta", "0.7", "--t-max", "3", "--steps", "30",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,re0,im0,re1,im1,dirac_norm,cpt_norm2"));
    assert_eq!(text.lines().count(), 32);
    let cpt: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert!(cpt.iter().all(|x| (x - cpt[0]).abs() < 1e-10));

    let out = qbrach(&["--format", "csv", "classical-orbit", "--x0", "2i", "--stride", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,re_x,im_x,re_p,im_p,re_E,im_E"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - PI).abs() < 1e-8);
    assert!((last[2] - 2.0).abs() < 1e-8);
}

#[test]
fn switched_flight_reports_constant_potential_time() {
    let out = qbrach(&["switched-flight", "--a", "2,10,100"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let times: Vec<f64> = doc["outputs"]["table"]["potential_time"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(times.len(), 3);
    assert!(times.iter().all(|t| (t - PI / 2.0).abs() < 1e-6));
}

#[test]
fn dilation_variants() {
    let out = qbrach(&["dilate", "--r", "0.5", "--s", "1", "--theta", "0.7", "--t-max", "5", "--steps", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let out = qbrach(&[
        "dilate", "--variant", "fixed", "--r", "0.5", "--s", "1", "--theta", "0.7", "--t-max", "5",
        "--eigenvalues", "1,-1,2,-2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["outputs"]["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn three_level_reports_sqrt6() {
    let out = qbrach(&["three-level", "--omega-ji", "1", "--omega-ki", "3"]);
    let doc = json(&out);
    let ratio = doc["outputs"]["time_over_passage"].as_f64().unwrap();
    assert!((ratio - 6f64.sqrt()).abs() < 1e-9);
}
