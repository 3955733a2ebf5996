use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use acoustic_bh_cli::commands::{cmd_geometry, cmd_limit, cmd_spectrum};
use acoustic_bh_cli::config::{Format, LoadedConfig};
use acoustic_bh_cli::output::{render_csv, Cell, Meta, Table};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_acoustic-bh");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(v: &Value) -> LoadedConfig {
    LoadedConfig::from_bytes(v.to_string().as_bytes()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

/// Data rows of a CSV written by the tool, split on commas.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn simple_cfg() -> Value {
    json!({
        "schema": 1,
        "field": {"kind": "constant", "A": -1.0, "B": 0.0},
        "packet": {"kind": "simple", "m": 0, "eta0": 1.0, "epsilon": 0.001, "a": 10.0},
        "sweeps": {"eta": [-1.0, 0.0, 1.0]}
    })
}

#[test]
fn unknown_keys_are_rejected() {
    let mut v = simple_cfg();
    v["quadrature"] = json!({"rel_tol": 1e-9, "tolerance": 1e-3});
    assert!(LoadedConfig::from_bytes(v.to_string().as_bytes()).is_err());
    let mut v = simple_cfg();
    v["field"]["C"] = json!(1.0);
    assert!(LoadedConfig::from_bytes(v.to_string().as_bytes()).is_err());
}

#[test]
fn wrong_schema_is_rejected() {
    let mut v = simple_cfg();
    v["schema"] = json!(2);
    let err = LoadedConfig::from_bytes(v.to_string().as_bytes()).unwrap_err();
    assert!(format!("{err:#}").contains("schema"));
}

#[test]
fn unsorted_sweep_is_rejected() {
    let mut v = simple_cfg();
    v["sweeps"]["a"] = json!([1e3, 1e2]);
    assert!(LoadedConfig::from_bytes(v.to_string().as_bytes()).is_err());
}

#[test]
fn shipped_configs_parse() {
    for name in ["simple.json", "tangent.json", "corner.json"] {
        let cfg = LoadedConfig::from_path(&configs().join(name)).unwrap();
        assert_eq!(cfg.sha256.len(), 64, "{name}");
        cfg.config.build_field().unwrap();
    }
}

#[test]
fn csv_numbers_round_trip() {
    let mut t = Table::new("t", vec![("x", "value"), ("k", "index")]);
    let values = [0.1, PI, 1.0 / 3.0, -2.5e-300, f64::MAX];
    for (k, &x) in values.iter().enumerate() {
        t.push(vec![Cell::Num(x), Cell::Int(k as i64)]);
    }
    let body = render_csv(&t, &Meta::new("abc", json!({})));
    assert!(body.contains("# column x: value"));
    assert!(body.contains("# config_sha256: abc"));
    let rows: Vec<&str> = body.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    for (row, &x) in rows.iter().zip(&values) {
        let cell = row.split(',').next().unwrap();
        assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{cell}");
    }
}

#[test]
fn constant_field_horizon_is_a_circle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load(&json!({"schema": 1, "field": {"kind": "constant", "A": -1.5, "B": 0.4}}));
    cmd_geometry(&cfg, dir.path(), Format::Csv).unwrap();
    let rows = csv_rows(&dir.path().join("horizon.csv"));
    assert!(!rows.is_empty());
    for r in &rows {
        let rho: f64 = r[3].parse().unwrap();
        assert!((rho - 1.5).abs() < 1e-14, "{rho}");
    }
    let corners = read_json(&dir.path().join("corners.json"));
    assert_eq!(corners["corners"].as_array().unwrap().len(), 0);
    assert!(!dir.path().join("tangency_points.csv").exists());
}

#[test]
fn corner_field_has_one_corner() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = LoadedConfig::from_path(&configs().join("corner.json")).unwrap();
    cmd_geometry(&cfg, dir.path(), Format::Json).unwrap();
    let corners = read_json(&dir.path().join("corners.json"));
    assert_eq!(corners["corners"].as_array().unwrap().len(), 1);
    let phis: Vec<f64> =
        corners["characteristic_points"].as_array().unwrap().iter().map(|p| p["phi"].as_f64().unwrap()).collect();
    assert_eq!(phis.len(), 2);
    assert!(phis.iter().any(|p| (p - FRAC_PI_2).abs() < 1e-8));
    assert!(phis.iter().any(|p| (p - 3.0 * FRAC_PI_2).abs() < 1e-8 || (p + FRAC_PI_2).abs() < 1e-8));
    assert!(corners["closure_gap"].as_f64().unwrap() < 1e-8);
    let ergo = read_json(&dir.path().join("ergosphere.json"));
    assert_eq!(ergo["columns"][1]["name"], "rho");
    assert!(ergo["meta"]["config_sha256"].as_str().unwrap() == cfg.sha256);
}

#[test]
fn tangency_points_are_zeros_of_b() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = LoadedConfig::from_path(&configs().join("tangent.json")).unwrap();
    cmd_geometry(&cfg, dir.path(), Format::Csv).unwrap();
    let rows = csv_rows(&dir.path().join("tangency_points.csv"));
    let phis: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(phis.len(), 2);
    // B = 0.5 cos φ
    for p in phis {
        assert!((0.5 * p.cos()).abs() < 1e-12, "{p}");
    }
}

#[test]
fn spectrum_reports_density_and_split() {
    let dir = tempfile::tempdir().unwrap();
    let report = cmd_spectrum(&load(&simple_cfg()), dir.path(), Format::Csv).unwrap();
    assert!(!report.partial());
    let rows = csv_rows(&dir.path().join("c3_density.csv"));
    assert_eq!(rows.len(), 3);
    let c3_at_zero: f64 = rows[1][1].parse().unwrap();
    assert!((c3_at_zero - 0.5 * PI / PI.sinh()).abs() < 1e-3, "{c3_at_zero}");
    let n = read_json(&dir.path().join("nparticles.json"));
    let (h, nh, total) =
        (n["hawking_part"].as_f64().unwrap(), n["non_hawking_part"].as_f64().unwrap(), n["n_total"].as_f64().unwrap());
    assert!(h > 0.0 && nh > 0.0);
    assert!((h + nh - total).abs() <= 1e-12 * total);
    assert_eq!(n["partial"], false);
    assert!(n["decay"].is_null());
    assert_eq!(n["limit"]["sweep"].as_array().unwrap().len(), 0);
    assert!(n["limit"]["limit"].as_f64().unwrap() > 0.0);
}

#[test]
fn limit_sweep_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = simple_cfg();
    v["packet"]["epsilon"] = json!(0.25);
    v["sweeps"]["a"] = json!([10.0, 100.0]);
    cmd_limit(&load(&v), dir.path(), Format::Csv).unwrap();
    let rows = csv_rows(&dir.path().join("limit_sweep.csv"));
    assert_eq!(rows.len(), 2);
    let gaps: Vec<f64> = rows.iter().map(|r| r[3].parse::<f64>().unwrap().abs()).collect();
    assert!(gaps[1] < gaps[0]);
    let l = read_json(&dir.path().join("limit.json"));
    assert!(l["limit"].as_f64().unwrap() > 0.0);
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = configs().join("simple.json");
    for dir in [&a, &b] {
        let status = Command::new(BIN)
            .args(["spectrum", "--threads", "2", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["c3_density.csv", "nparticles.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn failure_writes_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, json!({"schema": 1, "field": {"kind": "constant", "A": -1.0, "B": 0.0}}).to_string()).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(BIN).args(["spectrum", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(!status.success());
    let err = read_json(&out.join("error.json"));
    assert!(err["error"].as_str().unwrap().contains("packet"));
}

#[test]
fn verify_single_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(BIN).args(["verify", "--suite", "geometry", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let r = read_json(&dir.path().join("verify_report.json"));
    assert_eq!(r["passed"], true);
}
