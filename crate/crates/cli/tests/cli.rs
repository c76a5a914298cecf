//! End-to-end runs of the `hardy` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).env("HARDY_LOG", "error").output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() <= tol
}

#[test]
fn factor_splits_off_the_zero_at_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "f.json", r#"{"coeffs": [[0, 0], [2, 0], [1, 0]]}"#);
    let out = dir.path().join("factor.json");
    let run = hardy(&["factor", "--input", s(&input), "--n", "256", "--check", "--out", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let r: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "factor");
    assert_eq!(r["config"]["n"], 256);
    assert_eq!(r["check"]["passed"], true);
    // inner = c z, outer = (2 + z)/c with |c| = 1
    let inner = r["inner_coeffs"]["coeffs"].as_array().unwrap();
    let outer = r["outer_coeffs"]["coeffs"].as_array().unwrap();
    assert_eq!((inner.len(), outer.len()), (2, 2));
    let c = (inner[1][0].as_f64().unwrap(), inner[1][1].as_f64().unwrap());
    assert!((c.0.hypot(c.1) - 1.0).abs() < 1e-10);
    let o0 = (outer[0][0].as_f64().unwrap(), outer[0][1].as_f64().unwrap());
    // c · outer_0 = 2
    assert!((c.0 * o0.0 - c.1 * o0.1 - 2.0).abs() < 1e-10);
    let csv = fs::read_to_string(dir.path().join("factor.csv")).unwrap();
    assert!(csv.starts_with("k,theta,f_re"));
    assert_eq!(csv.lines().count(), 257);
}

#[test]
fn zero_function_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let samples = vec!["[0, 0]"; 16].join(", ");
    let input = write(&dir, "z.json", &format!(r#"{{"n": 16, "samples": [{samples}]}}"#));
    let run = hardy(&["factor", "--input", s(&input)]);
    assert_eq!(code(&run), 2);
    assert!(String::from_utf8_lossy(&run.stderr).contains("zero function"));
    let run = hardy(&["unwind", "--input", s(&input)]);
    assert_eq!(code(&run), 2);
}

#[test]
fn malformed_input_exits_1_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "bad.json", r#"{"n": 4, "samples": [[1, 0], [0, 1], [1, "one"], [0, 0]]}"#);
    let run = hardy(&["factor", "--input", s(&input)]);
    assert_eq!(code(&run), 1);
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("samples[2]"), "{err}");
    let run = hardy(&["factor", "--input", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&run), 1);
    let run = hardy(&["unwind", "--input", s(&input), "--strategy", r#"{"kind": "moebius"}"#]);
    assert_eq!(code(&run), 1);
}

#[test]
fn unwinding_z_plus_z_squared() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "f.json", r#"{"coeffs": [[0, 0], [1, 0], [1, 0]]}"#);
    let r = stdout_json(&hardy(&["unwind", "--input", s(&input), "--n", "64", "--p", "2,4"]));
    let energies: Vec<f64> = r["energies"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    assert_eq!(energies.len(), 3, "{energies:?}");
    for (e, want) in energies.iter().zip([0.0, 1.0, 1.0]) {
        assert!((e - want).abs() < 1e-12, "{energies:?}");
    }
    assert_eq!(r["stopped"], true);
    assert!(close(&r["energy_defect"], 0.0, 1e-12));
    assert_eq!(r["config"]["strategy"]["kind"], "fixed_inner");
    assert_eq!(r["convergence"]["monotone_l2"], true);
    let errors = r["convergence"]["errors"].as_array().unwrap();
    assert!(close(&errors[0][0], 2f64.sqrt(), 1e-12));
    assert!(close(&errors[2][0], 0.0, 1e-12));
}

#[test]
fn greedy_recovers_a_single_atom() {
    let dir = tempfile::tempdir().unwrap();
    // √(1 - |a|²)/(1 - ā z) with a = 0.5: coefficients √0.75 · 0.5^k
    let coeffs: Vec<String> = (0..60).map(|k| format!("[{}, 0]", 0.75f64.sqrt() * 0.5f64.powi(k))).collect();
    let input = write(&dir, "atom.json", &format!(r#"{{"coeffs": [{}]}}"#, coeffs.join(", ")));
    let strategy = r#"{"kind": "greedy_afd", "radii": 2, "angles": 4, "r_max": 0.5}"#;
    let r = stdout_json(&hardy(&["unwind", "--input", s(&input), "--n", "256", "--strategy", strategy]));
    assert_eq!(r["terms"].as_array().unwrap().len(), 1);
    assert!(close(&r["energies"][0], 1.0, 1e-10));
    assert!(close(&r["terms"][0]["point"][0], 0.5, 0.0));
    assert_eq!(r["stopped"], true);
}

#[test]
fn zero_terms_leave_f_as_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "f.json", r#"{"coeffs": [[1, 0], [0, 1]]}"#);
    let r = stdout_json(&hardy(&["unwind", "--input", s(&input), "--n", "32", "--terms", "0"]));
    assert!(r["terms"].as_array().unwrap().is_empty());
    assert!(close(&r["residual_energy"], 2.0, 1e-12));
    assert_eq!(r["stopped"], false);
}

#[test]
fn verify_recur_passes() {
    let r = stdout_json(&hardy(&["verify", "--suite", "recur", "--n", "200"]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["config"]["suite"], "recur");
    assert_eq!(r["samples"], 200);
    assert!(r["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn verify_psi_bound_reports_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.json");
    let run = hardy(&["verify", "--suite", "psi_bound", "--n", "500", "--out", s(&out)]);
    assert_eq!(code(&run), 3);
    let r: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(r["params"]["include_j0"], true);
    assert!(dir.path().join("psi.csv").exists());
}

#[test]
fn verify_mt_gram_on_a_zero_list() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = write(&dir, "z.json", &format!(r#"{{"zeros": [{}]}}"#, vec!["[0, 0]"; 8].join(", ")));
    let r = stdout_json(&hardy(&["verify", "--suite", "mt_gram", "--input", s(&zeros), "--n", "256"]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["samples"], 8);
    let hp = write(&dir, "h.json", r#"{"domain": "halfplane", "zeros": [[0, 1], [1, 2], [-1, 0.5]]}"#);
    let r = stdout_json(&hardy(&["verify", "--suite", "mt_gram", "--input", s(&hp)]));
    assert_eq!(r["passed"], true, "{}", r["max_residual"]);
}

#[test]
fn unknown_suite_exits_1() {
    assert_eq!(code(&hardy(&["verify", "--suite", "riemann"])), 1);
    assert_eq!(code(&hardy(&["frobnicate"])), 1);
    assert_eq!(code(&hardy(&["--help"])), 0);
}

#[test]
fn wavelet_atom_has_unit_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir,
        "w.json",
        r#"{"function": {"kind": "wavelet", "n": 0, "j": 0}, "scales": [0, 0], "shifts": [-1, 1]}"#,
    );
    let out = dir.path().join("w.json.out");
    let run = hardy(&["wavelet", "--input", s(&input), "--m", "4096", "--out", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let r: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    let c = &r["coeffs"][1];
    assert_eq!((c["n"].as_i64(), c["j"].as_i64()), (Some(0), Some(0)));
    assert!(close(&c["re"], 1.0, 1e-4) && close(&c["im"], 0.0, 1e-4));
    assert_eq!(r["config"]["nodes"], 4096);
    let csv = fs::read_to_string(dir.path().join("w.json.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn same_seed_same_report() {
    let a = hardy(&["verify", "--suite", "alpha", "--n", "50", "--seed", "7"]);
    let b = hardy(&["verify", "--suite", "alpha", "--n", "50", "--seed", "7"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
