use std::path::Path;
use std::process::{Command, Output};

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn config(case: &str, mu: &str, s_min: f64, s_max: f64, out: &Path) -> String {
    format!(
        r#"{{"mu": {mu}, "case": {case}, "s_min": {s_min:e}, "s_max": {s_max:e}, "ray_angle": 0.0,
            "points_per_decade": 8, "output_dir": {:?}}}"#,
        out.display().to_string()
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbridge")).args(args).output().unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn zero_seed_gives_zero_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let body = config(r#"{"family": "direct", "sigma": [0, 0], "a": [0, 0], "b": [0, 0]}"#, "[0, 0]", 1e-6, 0.1, &out);
    let cfg = write_config(dir.path(), "zero.json", &body);
    let o = run(&["integrate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out.join("integrate_samples.csv"));
    assert_eq!(header[..4], ["s_re", "s_im", "omega1_re", "omega1_im"]);
    assert_eq!(header.last().unwrap(), "defect");
    assert_eq!(rows.len(), 41);
    for row in rows {
        assert!(row[2..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn integrate_keeps_defect_small() {
    let dir = tempfile::tempdir().unwrap();
    let body = config(r#"{"family": "case_i", "b_const": [1, 0], "sigma": [0.5, 0]}"#, "[0.1, 0]", 1e-6, 0.1, dir.path());
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["integrate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&dir.path().join("integrate_samples.csv"));
    let k = header.iter().position(|h| h == "defect").unwrap();
    let worst = rows.iter().map(|r| r[k].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("integrate_report.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
}

#[test]
fn malformed_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{\"mu\": [0.1, 0]");
    let o = run(&["integrate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());

    let body = config(r#"{"family": "case_ii"}"#, "[0.2, 0]", 0.5, 0.1, dir.path());
    let cfg = write_config(dir.path(), "range.json", &body);
    let o = run(&["behavior-fit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s_min"));

    let o = run(&["integrate", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reduce_compare_slopes_and_out_override() {
    let dir = tempfile::tempdir().unwrap();
    let body = config(r#"{"family": "case_i", "b_const": [1, 0], "sigma": [0.5, 0]}"#, "[0.1, 0]", 1e-7, 0.1, dir.path());
    let cfg = write_config(dir.path(), "c.json", &body);
    let other = dir.path().join("elsewhere");
    let o = run(&["reduce-compare", "--config", cfg.to_str().unwrap(), "--out", other.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(other.join("reduce-compare_report.json")).unwrap()).unwrap();
    let slopes = summary["slopes"].as_array().unwrap();
    let s2 = slopes.iter().find(|s| s["name"] == "omega2").unwrap();
    assert!((s2["slope"].as_f64().unwrap() - 1.5).abs() < 0.1);
    assert!(s2["residual"].as_f64().unwrap() >= 0.0);
    let (header, _) = csv_rows(&other.join("reduce-compare_samples.csv"));
    assert!(header.contains(&"omega2_a_re".to_string()) && header.contains(&"diff3".to_string()));
}

#[test]
fn failed_check_exits_1() {
    // Case II with the printed log constant misses the 5% band at small s.
    let dir = tempfile::tempdir().unwrap();
    let body = config(r#"{"family": "case_ii"}"#, "[0.2, 0]", 1e-8, 1e-2, dir.path());
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["behavior-fit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL deviation at smallest s"));
}

#[test]
fn series_check_and_tolerance_override() {
    let dir = tempfile::tempdir().unwrap();
    let body = config(r#"{"family": "case_i", "b_const": [1, 0], "sigma": [0.3, 0]}"#, "[0.1, 0]", 1e-6, 1e-4, dir.path());
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["series-check", "--config", cfg.to_str().unwrap(), "--tol-override", "1e-11"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("series-check_report.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["tolerances"]["rel"].as_f64(), Some(1e-11));
    assert_eq!(summary["checks"].as_array().unwrap().len(), 3);

    let o = run(&["series-check", "--config", cfg.to_str().unwrap(), "--tol-override", "-1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn near_pole_seed_is_a_numeric_failure() {
    // Case III seed placed on a zero of sin(ν ln s + D) is refused by the guard.
    let dir = tempfile::tempdir().unwrap();
    let nu = 0.3f64;
    let mu = pbridge::C64::new(0.2, 0.0);
    let case = pbridge::piii::TracyCase::case_iii(nu, mu).unwrap();
    let d = case.phase_constant().unwrap();
    let angle = -d.im / nu;
    let s_min = ((-3.0 * std::f64::consts::PI - d.re) / nu).exp();
    let body = format!(
        r#"{{"mu": [0.2, 0], "case": {{"family": "case_iii", "nu": 0.3}}, "s_min": {s_min:e}, "s_max": 0.01,
            "ray_angle": {angle:e}, "points_per_decade": 4, "output_dir": {:?}}}"#,
        dir.path().display().to_string()
    );
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = run(&["integrate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(&["integrate"]).status.code(), Some(3));
    assert_eq!(run(&["explode", "--config", "x.json"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
