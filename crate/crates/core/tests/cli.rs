use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pam_ed::config::RunConfig;
use serde_json::Value;

fn pam_ed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pam-ed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with(dir: &Path, toml: &str, sub: &str) -> (i32, String) {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, toml).unwrap();
    let out_dir = dir.join("out");
    let out = pam_ed(&[sub, cfg.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap(), "--threads", "2"]);
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr),
    )
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out/report.json")).unwrap()).unwrap()
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn minimal_verify_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = run_with(dir.path(), "tasks = [\"verify\"]\n", "run");
    assert_eq!(code, 0, "{stdout}");
    let r = report(dir.path());
    assert_eq!(r["verdict"], "pass");
    for name in ["theorem1_pair", "theorem2_transverse", "theorem3_longitudinal"] {
        let check = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap();
        assert_eq!(check["status"], "passed");
    }
    let csv = fs::read_to_string(dir.path().join("out/corr_zz.csv")).unwrap();
    assert!(csv.starts_with("r,h,value\n"));
    assert_eq!(csv.lines().count(), 1 + 16);
    assert!(dir.path().join("out/summary.txt").exists());
}

#[test]
fn periodic_odd_chain_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = run_with(dir.path(), "[lattice]\nlx = 3\nboundary = \"periodic\"\n", "run");
    assert_eq!(code, 2);
    assert!(stdout.contains("not bipartite"), "{stdout}");
    assert!(report(dir.path())["error"].as_str().unwrap().contains("not bipartite"));
}

#[test]
fn spectrum_task_alone_has_no_theorem_records() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run_with(dir.path(), "tasks = [\"spectrum\"]\n", "run");
    assert_eq!(code, 0);
    let r = report(dir.path());
    assert!(r["checks"].as_array().unwrap().is_empty());
    assert!(r["spectrum"]["sector_scan"]["rows"].as_array().unwrap().len() == 5);
    let csv = fs::read_to_string(dir.path().join("out/sectors.csv")).unwrap();
    assert!(csv.starts_with("n_up,n_down,e0\n"));
}

#[test]
fn unparsable_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run_with(dir.path(), "[model\n", "run");
    assert_eq!(code, 2);
    assert_eq!(report(dir.path())["status"], "error");
}

#[test]
fn solver_budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "tasks = [\"spectrum\"]\n[solver]\nmethod = \"lanczos\"\nmax_iterations = 3\n";
    let (code, _) = run_with(dir.path(), toml, "run");
    assert_eq!(code, 3);
    assert!(report(dir.path())["error"].as_str().unwrap().contains("did not converge"));
}

#[test]
fn validate_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_with(dir.path(), "[model]\nu = 4.0\n", "validate");
    assert_eq!(code, 0, "{out}");
    let (code, out) = run_with(dir.path(), "[model]\neps_d = -1.0\n", "validate");
    assert_eq!(code, 2);
    assert!(out.contains("symmetric condition violated"), "{out}");
    let (code, out) = run_with(dir.path(), "[lattice]\nlx = 4\n[solver]\nmax_dim = 100\n", "validate");
    assert_eq!(code, 2);
    assert!(out.contains("4900"), "{out}");
    assert!(!dir.path().join("out").exists(), "validate must not write outputs");
}

#[test]
fn sweep_subcommand_runs_the_sweep_only() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_with(dir.path(), "[lattice]\nlx = 1\n", "sweep");
    assert_eq!(code, 0, "{out}");
    let r = report(dir.path());
    assert_eq!(r["config"]["tasks"], serde_json::json!(["sweep"]));
    assert_eq!(r["sweep"]["points"].as_array().unwrap().len(), 4);
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn embedded_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "tasks = [\"spectrum\", \"correlations\", \"verify\"]\n[model]\neps_aux = 0.1\n";
    let (code, _) = run_with(dir.path(), toml, "run");
    assert_eq!(code, 0);
    let mut first = report(dir.path());
    let embedded: RunConfig = serde_json::from_value(first["config"].clone()).unwrap();
    let (code, _) = run_with(dir.path(), &embedded.to_toml_string().unwrap(), "run");
    assert_eq!(code, 0);
    let mut second = report(dir.path());
    strip_timing(&mut first);
    strip_timing(&mut second);
    assert_eq!(first, second);
}
