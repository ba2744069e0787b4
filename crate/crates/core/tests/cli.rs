mod common;

use std::path::Path;

use common::{block_profile, branch, two_region};
use wta::cli::{parse_range, run_with, EXIT_DATA, EXIT_OK, EXIT_SOLVER, EXIT_USAGE};
use wta::data_io::write_scenario;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["wta"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Replaces the wall clock reading so reruns can be compared byte for byte.
fn mask_clock(text: &str) -> String {
    let key = "\"wall_clock_s\":";
    let mut out = String::new();
    let mut rest = text;
    while let Some(i) = rest.find(key) {
        out.push_str(&rest[..i + key.len()]);
        rest = &rest[i + key.len()..];
        let end = rest.find([',', '}', '\n']).unwrap_or(rest.len());
        out.push('#');
        rest = &rest[end..];
    }
    out.push_str(rest);
    out
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn solve_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let (code, stdout, stderr) = run(&["solve", "--out", dir]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    for name in [
        "solution.json",
        "table_I.csv",
        "table_II.csv",
        "lcoa_stacks.csv",
        "transport.csv",
    ] {
        assert!(tmp.path().join(name).is_file(), "{name} missing");
        assert!(stdout.contains(name));
    }
    let sol: serde_json::Value = serde_json::from_str(&read(tmp.path(), "solution.json")).unwrap();
    let keys: Vec<&String> = sol.as_object().unwrap().keys().collect();
    assert_eq!(keys[0], "manifest");
    for k in [
        "capacities",
        "flows",
        "schedules",
        "lcoa_stacks",
        "sources",
        "diagnostics",
    ] {
        assert!(sol.get(k).is_some(), "section {k}");
    }
    let manifest = &sol["manifest"];
    assert!(manifest["inputs"]
        .as_object()
        .unwrap()
        .values()
        .all(|h| h.as_str().unwrap().len() == 64));
    assert!(manifest["lp_iterations"].as_u64().unwrap() > 0);
    let table = read(tmp.path(), "table_I.csv");
    assert!(table.starts_with("# manifest: {"));
}

#[test]
fn reruns_are_identical_apart_from_the_clock() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let (code, _, err) = run(&["solve", "--jobs", "2", "--out", d.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{err}");
    }
    for name in [
        "solution.json",
        "table_I.csv",
        "table_II.csv",
        "lcoa_stacks.csv",
        "transport.csv",
    ] {
        assert_eq!(
            mask_clock(&read(a.path(), name)),
            mask_clock(&read(b.path(), name)),
            "{name}"
        );
    }
}

#[test]
fn validate_accepts_the_bundled_data() {
    let (code, stdout, _) = run(&["validate"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn missing_files_are_data_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&["validate", "--scenario", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.starts_with("error:"));
    let (code, _, _) = run(&["solve", "--scenario", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn infeasible_plans_are_solver_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let mut s = two_region(800.0, 500.0, block_profile(1, 10, 0.7));
    s.grid = vec![branch(1, 2, 1.0)];
    write_scenario(tmp.path(), &s).unwrap();
    let (code, _, err) = run(&["solve", "--scenario", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_SOLVER, "{err}");
    // The same data solves once trucks may cover the distance.
    let (code, _, err) = run(&["solve", "--scenario", tmp.path().to_str().unwrap(), "--dmax", "900"]);
    assert_eq!(code, EXIT_OK, "{err}");
}

#[test]
fn usage_errors() {
    for args in [
        &["frobnicate"][..],
        &["solve", "--bogus"],
        &["sweep"],
        &["solve", "--jobs", "many"],
        &[],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in [
        "validate",
        "solve",
        "report",
        "fit",
        "buffer",
        "hsc",
        "grid",
        "sweep",
        "compare-cta",
    ] {
        assert!(out.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn coal_comparison_strings() {
    let (code, out, _) = run(&["compare-cta", "--production-mt", "1.06", "--wta-lcoa", "0.57"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coal_saved_mtce_per_year"].as_f64().unwrap(), 1.79);
    assert_eq!(v["co2_avoided_mt_per_year"].as_f64().unwrap(), 4.89);
    assert!(v["summary"].as_str().unwrap().contains("1.79 Mtce"));
    assert!(v["summary"].as_str().unwrap().contains("4.89 Mt CO2"));
    let (code, _, _) = run(&["compare-cta", "--production-mt", "lots", "--wta-lcoa", "0.5"]);
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn capex_grid_has_thirty_six_rows() {
    let (code, out, err) = run(&["sweep", "capex", "--region", "12"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: "));
    assert_eq!(lines.next().unwrap(), "re_scale,el_scale,lcoa_eur_per_kg");
    assert_eq!(lines.count(), 36);
}

#[test]
fn local_sweep_rows() {
    let (code, out, _) = run(&["sweep", "local", "--region", "12", "--energy", "0:500:11"]);
    assert_eq!(code, EXIT_OK);
    let body: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(body.len(), 11);
    assert!(body[10].contains("exceeds the wind potential"));
}

#[test]
fn buffer_hsc_and_grid_tools() {
    let (code, out, _) = run(&["buffer", "size", "--region", "12"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["share_of_daily_hydrogen"].as_f64().unwrap() <= 0.10);

    let (code, out, _) = run(&["hsc", "paths"]);
    assert_eq!(code, EXIT_OK);
    let feasible_into_1: Vec<String> = out
        .lines()
        .skip(2)
        .filter(|l| l.split(',').nth(1) == Some("1") && l.split(',').nth(4) == Some("true"))
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(feasible_into_1, ["2", "6", "8", "9"]);

    let (code, out, _) = run(&["grid", "check"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["within_limits"], true);
}

#[test]
fn fit_reads_samples() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("samples.csv");
    let rows: String = (1..=10)
        .map(|k| {
            let p = 100.0 * k as f64;
            format!("{p},{}\n", -5e-4 * p * p + 12.0 * p)
        })
        .collect();
    std::fs::write(&path, format!("p_mw,e_mwh\n{rows}")).unwrap();
    let (code, out, err) = run(&["fit", "--samples", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["a"].as_f64().unwrap() + 5e-4).abs() < 1e-9);
    assert!((v["b"].as_f64().unwrap() - 12.0).abs() < 1e-6);
    assert_eq!(v["concave"], true);
}

#[test]
fn ranges() {
    assert_eq!(parse_range("0.5:1.0:6").unwrap(), vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0]);
    assert_eq!(parse_range("3").unwrap(), vec![3.0]);
    assert!(parse_range("1:2").is_err());
    assert!(parse_range("1:2:0").is_err());
}
