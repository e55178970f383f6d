//! End-to-end tests of the `ptising` binary: output formats, exit codes,
//! and the scan pipeline through real files.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptising"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Parse `key = value` text output into a map.
fn kv(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter_map(|line| {
            let (k, v) = line.split_once(" = ")?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn get_f64(map: &HashMap<String, String>, key: &str) -> f64 {
    map.get(key)
        .unwrap_or_else(|| panic!("missing key {key} in {map:?}"))
        .parse()
        .unwrap_or_else(|_| panic!("non-numeric {key}"))
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Usage"));
}

#[test]
fn missing_required_argument_is_a_usage_error() {
    let out = run(&["energy", "--eta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_ring_size_is_a_domain_error() {
    let out = run(&["energy", "--eta", "0.5", "--xi", "0.3", "--sites", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn thermodynamic_energy_matches_closed_form() {
    let out = run(&["energy", "--eta", "1.0", "--xi", "0.0"]);
    assert!(out.status.success());
    let map = kv(&stdout(&out));
    assert_eq!(map["mode"], "thermodynamic");
    let density = get_f64(&map, "energy_density");
    assert!((density + 4.0 / PI).abs() < 1e-12, "{density}");
}

#[test]
fn finite_ring_energy_approaches_the_limit() {
    let thermo = kv(&stdout(&run(&["energy", "--eta", "2.0", "--xi", "0.0"])));
    let finite = kv(&stdout(&run(&[
        "energy", "--eta", "2.0", "--xi", "0.0", "--sites", "600",
    ])));
    let a = get_f64(&thermo, "energy_density");
    let b = get_f64(&finite, "energy_density");
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    assert!(finite.contains_key("energy_total"));
}

#[test]
fn json_format_emits_valid_json() {
    let out = run(&[
        "energy", "--eta", "1.0", "--xi", "0.0", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let density = doc["energy_density"].as_f64().unwrap();
    assert!((density + 4.0 / PI).abs() < 1e-12);
}

#[test]
fn dispersion_reports_branch_values() {
    let out = run(&[
        "dispersion", "--eta", "0.6", "--xi", "0.8", "--k", "1e-3", "--n", "1",
    ]);
    let map = kv(&stdout(&out));
    // At r = 1 the band bottom is 2*sqrt(1 - xi^2) = 1.2.
    assert!((get_f64(&map, "eps_min_at_zero") - 1.2).abs() < 1e-12);
    assert!((get_f64(&map, "eps") - 1.2).abs() < 1e-2);
    let negated = kv(&stdout(&run(&[
        "dispersion", "--eta", "0.6", "--xi", "0.8", "--k", "1e-3", "--n", "2",
    ])));
    assert!((get_f64(&map, "eps") + get_f64(&negated, "eps")).abs() < 1e-14);
}

#[test]
fn laplacian_finite_differences_agree_with_closed_form() {
    let closed = kv(&stdout(&run(&["laplacian", "--eta", "0.5", "--xi", "0.3"])));
    let fd = kv(&stdout(&run(&[
        "laplacian", "--eta", "0.5", "--xi", "0.3", "--fd",
    ])));
    assert_eq!(closed["method"], "closed_form");
    assert_eq!(fd["method"], "finite_difference");
    let a = get_f64(&closed, "laplacian");
    let b = get_f64(&fd, "laplacian");
    assert!((a - b).abs() < 1e-5 * a.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn berry_presets_at_the_origin() {
    let sum = run(&[
        "berry", "--eta", "0", "--xi", "0", "--preset", "sum", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&sum)).unwrap();
    assert!((doc["curvature"].as_f64().unwrap()).abs() < 1e-12);
    assert!((doc["curvature_im"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let diff = run(&[
        "berry", "--eta", "0", "--xi", "0", "--preset", "diff", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&diff)).unwrap();
    assert!((doc["curvature"].as_f64().unwrap() + 1.0).abs() < 1e-10);
}

#[test]
fn phase_labels_cover_the_plane() {
    for (eta, xi, expect) in [
        ("0.5", "1.2", "ParamagnetI"),
        ("-0.5", "1.2", "ParamagnetIII"),
        ("0.3", "0.4", "FerromagnetII"),
        ("0.0", "1.5", "Boundary"),
    ] {
        let map = kv(&stdout(&run(&["phase", "--eta", eta, "--xi", xi])));
        assert_eq!(map["phase"], expect, "({eta},{xi})");
    }
}

#[test]
fn magnetization_on_the_real_axis_is_real() {
    let map = kv(&stdout(&run(&["magnetization", "--eta", "0.5", "--xi", "0"])));
    let expect = -2.0 * 0.258657904611342;
    assert!((get_f64(&map, "m_a") - expect).abs() < 1e-9);
    assert!((get_f64(&map, "m_b") - expect).abs() < 1e-9);
    // Purely real here, so no _im lines are emitted.
    assert!(!map.contains_key("m_a_im"));
}

#[test]
fn oracle_checks_report_small_defects() {
    let chain = kv(&stdout(&run(&[
        "oracle", "chain", "--eta", "0.5", "--xi", "0.3", "--sites", "6",
    ])));
    assert!(get_f64(&chain, "defect") < 1e-9);
    let overlap = kv(&stdout(&run(&[
        "oracle", "overlap", "--eta", "0.5", "--xi", "0.3", "--k", "0.8",
    ])));
    assert!(get_f64(&overlap, "antisymmetry_defect") < 1e-6);
    let pt = kv(&stdout(&run(&["oracle", "pt", "--eta", "0.7", "--xi", "0.4"])));
    assert!(get_f64(&pt, "chain_pt_defect") < 1e-12);
    assert!(get_f64(&pt, "block_pt_defect") < 1e-12);
}

#[test]
fn asymptotics_families_evaluate() {
    let circle = kv(&stdout(&run(&[
        "asymptotics", "circle", "--r", "1.001", "--phi", "0.6",
    ])));
    assert!(get_f64(&circle, "re_lap_predicted").is_finite());
    let axis = kv(&stdout(&run(&["asymptotics", "axis", "--eta", "1e-4"])));
    assert!(get_f64(&axis, "re_lap_predicted").is_finite());
}

#[test]
fn scan_pipeline_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("scan.json");
    std::fs::write(
        &config_path,
        r#"{
            "eta": {"min": -1.0, "max": 1.0, "count": 5},
            "xi": {"min": -0.8, "max": 0.8, "count": 4},
            "mode": {"sites": 80},
            "quantities": ["energy", "laplacian", "phase"]
        }"#,
    )
    .unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    let run1 = run(&[
        "scan",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out1.to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    assert!(run1.status.success(), "{}", String::from_utf8_lossy(&run1.stderr));
    let map = kv(&stdout(&run1));
    assert_eq!(map["rows"], "20");
    assert_eq!(map["format"], "csv");
    let run2 = run(&[
        "scan",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
        "--jobs",
        "4",
    ]);
    assert!(run2.status.success());
    let bytes1 = std::fs::read(&out1).unwrap();
    let bytes2 = std::fs::read(&out2).unwrap();
    assert_eq!(bytes1, bytes2, "scan output depends on worker count");
    let text = String::from_utf8(bytes1).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eta,xi,r,phi,re_eps_g,im_eps_g,re_lap,im_lap,re_c_sum,im_c_sum,re_c_diff,im_c_diff,re_m_a,im_m_a,phase,error"
    );
    assert_eq!(lines.count(), 20);
}

#[test]
fn scan_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.json");
    std::fs::write(&config_path, r#"{"eta": {"min": 0, "max": 1, "count": 1}}"#).unwrap();
    let out = run(&[
        "scan",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
