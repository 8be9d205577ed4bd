use std::fs;
use std::process::{Command, Output};

fn qsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsat")).args(args).output().expect("qsat runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scenario_file(dir: &tempfile::TempDir, body: &str) -> String {
    let p = dir.path().join("scenario.toml");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn default_report_succeeds() {
    let o = qsat(&["report"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for name in ["invariant_separation", "timing_shift", "kerr_rotation", "required_photons", "cmb_drift_bound"] {
        assert!(out.contains(name), "missing {name}");
    }
}

#[test]
fn unknown_key_is_config_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(&dir, "preset = \"geo\"\nbogus_key = 3\n");
    let o = qsat(&["--scenario", &path, "report"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("bogus_key"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn negative_wavelength_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(&dir, "wavelength = -1.0\n");
    let o = qsat(&["--scenario", &path, "report"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("wavelength"));
}

#[test]
fn missing_scenario_file_is_config_error() {
    let o = qsat(&["--scenario", "/nonexistent/qsat.toml", "report"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_error_exits_three() {
    let o = qsat(&["bell-sim", "--visibility", "1.5", "--pairs", "100"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn csv_report_uses_lf_and_fixed_header() {
    let o = qsat(&["--format", "csv", "report"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(!out.contains('\r'));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("effect,value,unit,reference"));
    for line in lines {
        let value = line.split(',').nth(1).unwrap();
        assert!(value.parse::<f64>().is_ok() || value == "inf", "{line}");
    }
}

#[test]
fn empty_effect_list_keeps_geometry_only() {
    let o = qsat(&["--effects", "", "--format", "csv", "report"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 5);
}

#[test]
fn unknown_effect_is_rejected() {
    let o = qsat(&["--effects", "timing,astrology", "report"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geo_preset_window() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(&dir, "preset = \"geo\"\n");
    let o = qsat(&["--scenario", &path, "--effects", "windows", "--format", "csv", "report"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("light_time,")).unwrap();
    let t: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((t - 0.119).abs() < 1e-3, "{t}");
}

#[test]
fn nv_curve_endpoints() {
    let o = qsat(&["curves", "nv", "--points", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "V,N");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].ends_with(",105"));
}

#[test]
fn bell_sim_is_reproducible_across_workers() {
    let a = qsat(&["bell-sim", "--pairs", "200000", "--seed", "9", "--workers", "1", "--format", "csv"]);
    let b = qsat(&["bell-sim", "--pairs", "200000", "--seed", "9", "--workers", "4", "--format", "csv"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = qsat(&["bell-sim", "--pairs", "200000", "--seed", "10", "--format", "csv"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn diffusion_output_is_normalized() {
    let o = qsat(&["diffusion", "--points", "128", "--c-diff", "0.1", "--d-drift", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 128);
    let dx = 2.0 * std::f64::consts::PI / 128.0;
    let mass: f64 = rows.iter().map(|r| r[2]).sum::<f64>() * dx;
    assert!((mass - 1.0).abs() < 1e-9, "{mass}");
}

#[test]
fn orbit_samples_and_fixed_range_refusal() {
    let o = qsat(&["orbit", "--duration", "600", "--step", "60"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 11);
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(&dir, "preset = \"au\"\n");
    let o = qsat(&["--scenario", &path, "orbit"]);
    assert_eq!(o.status.code(), Some(2));
}
