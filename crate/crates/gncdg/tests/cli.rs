use std::path::Path;
use std::process::{Command, Output};

use gncdg::output::read_csv;

fn gncdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gncdg")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn scenarios_lists_the_catalog() {
    let out = gncdg(&["scenarios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in gncdg::scenario::NAMES {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn run_writes_gauges_snapshots_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rest.toml",
        "scenario = \"flat_rest\"\n[mesh]\nnx = 4\nny = 4\n[scheme]\nk = 1\n[run]\nt_final = 0.02\n[output]\ngauges = [[0.5, 0.5], [0.1, 0.9]]\n",
    );
    let out_dir = dir.path().join("out");
    let out = gncdg(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&out_dir.join("gauges.csv")).unwrap();
    assert_eq!(header, ["t", "t_shifted", "eta(0.5,0.5)", "eta(0.1,0.9)"]);
    assert_eq!(rows.last().unwrap()[0], 0.02);
    assert!(rows.iter().all(|r| r[2] == 0.0 && r[3] == 0.0));
    assert!(out_dir.join("snapshot_0000.vtk").exists());
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["scenario"], "flat_rest");
    assert_eq!(summary["mass_drift"], 0.0);
}

#[test]
fn dispersion_writes_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.csv");
    let out = gncdg(&["dispersion", "--alpha", "1,1.159", "--samples", "10", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&p).unwrap();
    assert_eq!(header.len(), 6);
    assert_eq!(rows.len(), 11);
}

#[test]
fn bad_config_exits_with_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "scenario = \"seawall\"\n[scheme]\nk = 5\n");
    let out = gncdg(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scheme.k"));

    let cfg = write_config(dir.path(), "typo.toml", "scenario = \"seawall\"\n\n[schem]\nk = 1\n");
    let out = gncdg(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn numerical_failure_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "blow.toml",
        "scenario = \"periodic_solitary\"\n[scheme]\nk = 1\nfixed_dt = 5.0\ntvb = false\npositivity = false\n[run]\nt_final = 50.0\n",
    );
    let out = gncdg(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));
}

#[test]
fn unwritable_output_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), "rest.toml", "scenario = \"flat_rest\"\n[run]\nt_final = 0.01\n");
    let out = gncdg(&["run", &cfg, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        let cfg = gncdg::RunConfig::load(&p, &gncdg::Overrides::default()).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        seen.push(cfg.scenario);
    }
    seen.sort();
    let mut names = gncdg::scenario::NAMES.map(String::from).to_vec();
    names.sort();
    assert_eq!(seen, names);
}
