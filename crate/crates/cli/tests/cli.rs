//! End-to-end runs of the `shelab` binary on small configurations.

use std::path::Path;
use std::process::{Command, Output};

fn shelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_in(dir: &Path, config: &str, out: &str) -> Output {
    let out = dir.join(out);
    shelab(&["run", "--config", config, "--out", out.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_GRID: &str = "[grid]\nwidth = 4.0\nnx = 128\n";

#[test]
fn zero_replicas_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "kind = \"ensemble\"\nreplicas = 0\n");
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("replicas"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn validate_reports_errors_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.toml", &format!("kind = \"ensemble\"\nscales = [0.125]\n{SMALL_GRID}"));
    let o = shelab(&["validate", "--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("8 dx"), "{}", stderr(&o));

    let burn = write_config(dir.path(), "burn.toml", "kind = \"simulate\"\nmass = 2.0\nburn_in = 4.0\n");
    let o = shelab(&["validate", "--config", &burn]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("burn_in"));

    let coarse_dt = write_config(
        dir.path(),
        "dt.toml",
        &format!("kind = \"simulate\"\n{SMALL_GRID}dt = 0.0078125\n"),
    );
    let o = shelab(&["validate", "--config", &coarse_dt]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    // the echo is itself a valid config
    let echo = write_config(dir.path(), "echo.toml", &stdout(&o));
    assert_eq!(shelab(&["validate", "--config", &echo]).status.code(), Some(0));
}

#[test]
fn describe_known_and_unknown_kinds() {
    let o = shelab(&["describe", "holder-fit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("alpha < 1/2"));
    let o = shelab(&["describe", "verify-deterministic"]);
    let text = stdout(&o);
    for check in ["p3", "p4-local", "p4-global", "p5"] {
        assert!(text.contains(check), "{text}");
    }
    let o = shelab(&["describe", "telepathy"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("scaling-test"));
}

#[test]
fn identical_runs_give_identical_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "e.toml",
        &format!("kind = \"ensemble\"\nreplicas = 6\nseed = 11\nalphas = [0.4]\n{SMALL_GRID}"),
    );
    assert_eq!(run_in(dir.path(), &cfg, "a").status.code(), Some(0));
    let o = shelab(&[
        "run",
        "--config",
        &cfg,
        "--out",
        dir.path().join("b").to_str().unwrap(),
        "--sequential",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = std::fs::read(dir.path().join("a/samples.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/samples.csv")).unwrap();
    assert_eq!(a, b);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["config"]["replicas"], 6);
}

#[test]
fn simulate_writes_a_readable_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.toml", &format!("kind = \"simulate\"\n{SMALL_GRID}"));
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let field = shelab::io::read_field(std::fs::File::open(out.join("field.bin")).unwrap()).unwrap();
    assert_eq!(field.grid().nx(), 128);
    let profile = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    assert!(profile.lines().count() >= 2);
    for name in ["report.json", "manifest.json", "samples.csv", "config.toml"] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn holder_fit_reports_a_slope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "h.toml",
        "kind = \"holder-fit\"\nreplicas = 4\n[grid]\nwidth = 8.0\nnx = 256\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    // a four-replica slope may land on either side of the band
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    let slope = report["slope"].as_f64().unwrap();
    assert!(slope > 0.0 && slope < 1.0, "{slope}");
    assert_eq!(report["pass"].as_bool().unwrap(), o.status.code() == Some(0));
}

#[test]
fn oracle_compare_writes_comparisons() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "o.toml",
        "kind = \"oracle-compare\"\nreplicas = 400\n[grid]\nwidth = 8.0\nnx = 64\n[oracle]\ntolerance = 0.3\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let rows = std::fs::read_to_string(dir.path().join("out/comparisons.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 5 + 3);

    let off = write_config(
        dir.path(),
        "off.toml",
        "kind = \"oracle-compare\"\n[grid]\nwidth = 8.0\nnx = 64\n[oracle]\npoints = [[0.0, 0.01]]\npairs = []\n",
    );
    let o = shelab(&["validate", "--config", &off]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("oracle.points"));
}

#[test]
fn failed_verdict_exits_with_two() {
    // an empty holder band cannot contain any slope
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "h.toml",
        "kind = \"holder-fit\"\nreplicas = 2\n[grid]\nwidth = 8.0\nnx = 256\n[holder]\nband = [0.98, 0.99]\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn scaling_test_with_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        "kind = \"scaling-test\"\nreplicas = 200\nscales = [1.0]\n[grid]\nwidth = 8.0\nnx = 64\n[scaling]\nfactors = [2.0]\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["controls"][0]["pass"], false);
}

#[test]
fn deterministic_checks_on_a_small_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.toml",
        "kind = \"verify-deterministic\"\n[grid]\nwidth = 8.0\n[deterministic]\ncases = 4\nnx = 64\n\
         p5_nx = 512\nsensitivity_nx = 128\nsensitivity_width = 4.0\nsensitivity_seeds = 1\n\
         sensitivity_scales = [1.0, 0.5]\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    let ids: Vec<&str> = report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["p3", "p4-local", "p4-global", "p5", "sensitivity"]);
}

#[test]
fn ensemble_with_lemma_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "l.toml",
        "kind = \"ensemble\"\nreplicas = 8\n[grid]\nwidth = 8.0\nnx = 128\n\
         [ensemble]\ncertificate_q = 1.0\n[ensemble.lemmas]\nshift_scales = [0.25, 0.125]\nsplit_scales = [0.5]\n",
    );
    let o = run_in(dir.path(), &cfg, "out");
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert!(out.join("lemmas.csv").exists());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["lemmas"].as_array().unwrap().len(), 3);
    assert!(report["summaries"][0]["moment_certificate"]["value"].is_number());
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let o = shelab(&["validate", "--config", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stderr(&o));
            seen += 1;
        }
    }
    assert!(seen >= 6);
}
