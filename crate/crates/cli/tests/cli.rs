use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).env_remove("CASIMIR_OUT_DIR").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&casimir(args))).unwrap()
}

fn schema_validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/verify_report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn pressure_cc() {
    let text = stdout(&casimir(&["pressure", "--setup", "cc", "--a", "1"]));
    assert!(text.contains("verdict: attractive"));
    let v = json(&["pressure", "--setup", "cc", "--a", "1", "--format", "json"]);
    let net = v["net"].as_f64().unwrap();
    assert!((net + 0.041123352).abs() < 1e-9);
    assert!((net / (-PI * PI / 240.0) - 1.0).abs() < 1e-15);
    assert_eq!(v["divergent_left"], "-3/16");
    assert_eq!(v["divergent_right"], "3/16");
    assert_eq!(v["divergences_cancel"], true);
}

#[test]
fn pressure_cp() {
    let v = json(&["pressure", "--setup", "cp", "--a", "1", "--format", "json"]);
    let net = v["net"].as_f64().unwrap();
    assert!((net - 0.035982933).abs() < 1e-9);
    assert_eq!(v["verdict"], "repulsive");
}

#[test]
fn pressure_oracle_matches_closed() {
    for setup in ["cc", "cp"] {
        let closed = json(&["pressure", "--setup", setup, "--format", "json"])["net"].as_f64().unwrap();
        let oracle =
            json(&["pressure", "--setup", setup, "--method", "oracle", "--format", "json"])["net"].as_f64().unwrap();
        assert!((oracle / closed - 1.0).abs() < 1e-6, "{setup}: {oracle} vs {closed}");
    }
}

#[test]
fn pressure_with_third_plate() {
    let v = json(&["pressure", "--setup", "cc", "--ell", "3", "--format", "json"]);
    let right = v["right"].as_f64().unwrap();
    assert!((right - PI * PI / (240.0 * 16.0)).abs() < 1e-15);
    assert_eq!(casimir(&["pressure", "--ell", "0.5"]).status.code(), Some(2));
}

#[test]
fn pressure_in_pascals() {
    let v = json(&["pressure", "--setup", "cc", "--si-separation", "1e-6", "--format", "json"]);
    let pa = v["si"]["pressure_pa"].as_f64().unwrap();
    let expect = -PI * PI / 240.0 * 3.16152677e-26 / 1e-24;
    assert!((pa / expect - 1.0).abs() < 1e-14);
    // scale-free: the natural-unit a drops out
    let v2 = json(&["pressure", "--setup", "cc", "--a", "3", "--si-separation", "1e-6", "--format", "json"]);
    assert!((v2["si"]["pressure_pa"].as_f64().unwrap() / pa - 1.0).abs() < 1e-14);
    assert_eq!(casimir(&["pressure", "--si-separation", "-1"]).status.code(), Some(2));
}

#[test]
fn profile_midpoint_e2mb2() {
    let csv = stdout(&casimir(&[
        "profile",
        "--setup",
        "cc",
        "--a",
        "1",
        "--z-min",
        "0.25",
        "--z-max",
        "0.75",
        "--samples",
        "3",
        "--quantities",
        "e2mb2",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "z,xi,e2mb2");
    let mid: Vec<f64> = lines[2].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.5);
    assert!((mid[2] / (PI.powi(3) / 2.0) - 1.0).abs() < 1e-14);
}

#[test]
fn profile_cross_correlator_is_zero() {
    let csv = stdout(&casimir(&["profile", "--setup", "cp", "--samples", "7", "--quantities", "EB"]));
    for line in csv.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2..].iter().all(|&c| c == 0.0));
    }
}

#[test]
fn profile_layout() {
    let out = casimir(&["profile", "--setup", "cc", "--samples", "25"]);
    let csv = stdout(&out);
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 26);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header.len(), 2 + 3 * 3 + 2);
    assert_eq!(header[..2], ["z", "xi"]);
    assert!(header.contains(&"force_density") && header.contains(&"BB_zz"));
    for line in &lines[1..] {
        for cell in line.split(',') {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{cell}");
        }
    }
}

#[test]
fn profile_json() {
    let v =
        json(&["profile", "--setup", "cp", "--samples", "4", "--quantities", "EE,force_density", "--format", "json"]);
    assert_eq!(v["setup"], "cp");
    assert_eq!(v["columns"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn profile_invalid_requests() {
    for args in [
        &["profile", "--z-min", "0.6", "--z-max", "0.4"][..],
        &["profile", "--z-min", "0", "--z-max", "0.4"],
        &["profile", "--z-max", "1.0"],
        &["profile", "--samples", "1"],
        &["profile", "--quantities", "EE,EE"],
        &["profile", "--quantities", "torque"],
        &["profile", "--a", "-1"],
    ] {
        assert_eq!(casimir(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(casimir(&["pressure", "--setup", "pp"]).status.code(), Some(2));
    assert_eq!(casimir(&["pressure", "--a", "0"]).status.code(), Some(2));
    assert_eq!(casimir(&["pressure", "--method", "guess"]).status.code(), Some(2));
    assert_eq!(casimir(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(casimir(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["profile", "--setup", "cp", "--samples", "200"];
    let parallel = stdout(&casimir(&args));
    assert_eq!(parallel, stdout(&casimir(&args)));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(parallel, stdout(&casimir(&seq)));
    let verify = ["verify", "--suite", "pressure"];
    assert_eq!(stdout(&casimir(&verify)), stdout(&casimir(&verify)));
}

#[test]
fn verify_reports_validate_against_schema() {
    let validator = schema_validator();
    for suite in ["specfun", "oracle", "modes", "pressure", "identity", "all"] {
        let out = casimir(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{suite}: {errors:?}");
        assert_eq!(report["passed"], true);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema_validator();
    let bad = serde_json::json!({"suite": "identity", "passed": true, "total": 1, "failed": 0,
        "checks": [{"suite": "identity", "name": "x", "measured": 1.0, "tolerance": 1.0, "comparison": "approx", "pass": true}]});
    assert!(!validator.is_valid(&bad));
}

#[test]
fn verify_identity_checks() {
    let v = json(&["verify", "--suite", "identity"]);
    let checks = v["checks"].as_array().unwrap();
    let p = checks.iter().find(|c| c["name"] == "pressure_residual_rel_a_1").unwrap();
    assert!(p["measured"].as_f64().unwrap() < 1e-14);
    assert_eq!(p["tolerance"].as_f64().unwrap(), 1e-14);
}

#[test]
fn verify_specfun_reports_constants() {
    let v = json(&["verify", "--suite", "specfun"]);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for kind in ["F-at-0", "F-at-pi", "G-at-0", "G-at-pi"] {
        assert!(names.contains(&format!("constant_{kind}_extrapolated_abs").as_str()));
    }
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cp run\nsetup = cp\na = 2\nformat = json\nsamples = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&["--config", cfg, "pressure"]);
    assert_eq!(v["setup"], "cp");
    assert!((v["net"].as_f64().unwrap() - 7.0 * PI * PI / 1920.0 / 16.0).abs() < 1e-16);
    // flags beat the file
    let v = json(&["--config", cfg, "pressure", "--a", "1"]);
    assert!((v["net"].as_f64().unwrap() - 7.0 * PI * PI / 1920.0).abs() < 1e-15);
    let v = json(&["--config", cfg, "profile"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "setup = cc\nseparation = 3\n").unwrap();
    assert_eq!(casimir(&["--config", bad.to_str().unwrap(), "pressure"]).status.code(), Some(2));
    std::fs::write(&bad, "a = wide\n").unwrap();
    assert_eq!(casimir(&["--config", bad.to_str().unwrap(), "pressure"]).status.code(), Some(2));
    assert_eq!(casimir(&["--config", "/nonexistent/x.cfg", "pressure"]).status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["profile", "--setup", "cp", "--samples", "4"])
        .env("CASIMIR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("profile_cp.csv")).unwrap();
    assert_eq!(written.lines().count(), 5);

    let out = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["verify", "--suite", "identity", "--output", "id.json"])
        .env("CASIMIR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("id.json").exists());
}

#[test]
fn sweep_scales_as_inverse_fourth_power() {
    let csv = stdout(&casimir(&["sweep", "--setup", "cc", "--a-min", "1", "--a-max", "4", "--samples", "3"]));
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r[1] * r[0].powi(4) / (-PI * PI / 240.0) - 1.0).abs() < 1e-14);
    }
    assert_eq!(casimir(&["sweep", "--a-min", "2", "--a-max", "1"]).status.code(), Some(2));
}
