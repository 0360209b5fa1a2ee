use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sigrecon");
const PRIOR: &str = r#"{"type":"bandlimited","F":5}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(p: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(p)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["kernel", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--no-such-flag"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bad_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kernel", "--prior", PRIOR, "--T", "-1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["fit", "--prior", PRIOR, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--in"));
}

#[test]
fn malformed_prior_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kernel", "--prior", r#"{"type":"bandlimited","F":-1}"#, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

fn fit_pipeline(dir: &Path, plot: bool) {
    let d = path(dir);
    let mut synth = vec!["synth", "--prior", PRIOR, "--seed", "3", "--grid-n", "64", "--out", d];
    let mut fit = vec!["fit", "--prior", PRIOR, "--epsilon", "0.01", "--samples", "120", "--seed", "4", "--grid-n", "64"];
    let signal = dir.join("signal.json");
    fit.extend(["--in", path(&signal), "--out", d]);
    if plot {
        synth.push("--plot");
        fit.push("--plot");
    }
    ok(&synth);
    ok(&fit);
}

#[test]
fn fit_is_reproducible_and_plots_change_no_numeric_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    fit_pipeline(a.path(), false);
    fit_pipeline(b.path(), true);
    for name in ["signal.json", "signal.csv", "model.json", "fit.meta.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    assert!(b.path().join("fit.svg").exists());
    assert!(!a.path().join("fit.svg").exists());
}

#[test]
fn eval_matches_the_persisted_model() {
    let dir = tempfile::tempdir().unwrap();
    fit_pipeline(dir.path(), false);
    let model_path = dir.path().join("model.json");
    ok(&["eval", "--in", path(&model_path), "--grid-n", "200", "--out", path(dir.path())]);
    let model = sigrecon::ReconModel::from_json(&fs::read_to_string(&model_path).unwrap()).unwrap();
    let rows = csv_rows(&dir.path().join("eval.csv"));
    assert_eq!(rows.len(), 200);
    for r in rows {
        let v = model.evaluate(r[0]);
        assert!((v.re - r[1]).abs() <= 1e-12 && (v.im - r[2]).abs() <= 1e-12);
    }
}

#[test]
fn statdim_and_spectrum_agree() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["statdim", "--prior", PRIOR, "--grid-n", "128", "--out", path(dir.path())]);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("statdim.json")).unwrap()).unwrap();
    let spectrum = csv_rows(&dir.path().join("spectrum.csv"));
    assert_eq!(spectrum.len(), 128);
    let sd: f64 = spectrum.iter().map(|r| r[1] / (r[1] + 1e-3)).sum();
    assert!((sd - meta["stat_dim"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn sample_sidecar_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sample", "--alpha", "512", "--samples", "50", "--seed", "9", "--out", path(dir.path())]);
    let csv = fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    let side = fs::read_to_string(dir.path().join("samples.json")).unwrap();
    let set = sigrecon::io::sample_set_from_csv(&csv, &side).unwrap();
    assert_eq!(set.times.len(), 50);
}

#[test]
fn plot_renders_any_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = path(dir.path());
    ok(&["kernel", "--prior", PRIOR, "--points", "21", "--out", d]);
    let before = fs::read(dir.path().join("kernel.csv")).unwrap();
    let k = dir.path().join("kernel.csv");
    ok(&["plot", "--in", path(&k), "--out", d]);
    assert!(fs::read_to_string(dir.path().join("kernel.svg")).unwrap().starts_with("<svg"));
    assert_eq!(before, fs::read(&k).unwrap());
}
