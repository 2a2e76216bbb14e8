//! End-to-end tests of the `rotcav` binary.

use std::process::{Command, Output};

fn rotcav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotcav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn rates_cavity_reports_channels_and_totals() {
    let out = rotcav(&[
        "rates", "--omega0", "1e7", "--omega-rot", "5e9", "--radius", "5e-8", "--d-rho", "1e-29",
        "--d-phi", "1e-29", "--d-z", "1e-29", "--env", "cavity", "--omega-c", "4.99e9", "--q",
        "1e7", "--volume", "1e-14",
    ]);
    let json = stdout_json(&out);
    let gamma_up = json["gamma_up"].as_f64().unwrap();
    assert!((gamma_up / 3.570e7 - 1.0).abs() < 1e-3, "gamma_up = {gamma_up}");
    assert!(json["gamma_down"].as_f64().unwrap() > 0.0);
    assert!(!json["channels"].as_array().unwrap().is_empty());
}

#[test]
fn cyclic_flag_rescales_frequencies() {
    let tau = 2.0 * std::f64::consts::PI;
    let rad = rotcav(&[
        "rates",
        "--omega0",
        &format!("{}", 1e7 * tau),
        "--d-z",
        "1e-29",
        "--env",
        "free",
    ]);
    let hz = rotcav(&[
        "rates", "--omega0", "1e7", "--d-z", "1e-29", "--env", "free", "--cyclic",
    ]);
    let a = stdout_json(&rad)["gamma_down"].as_f64().unwrap();
    let b = stdout_json(&hz)["gamma_down"].as_f64().unwrap();
    assert!((a / b - 1.0).abs() < 1e-12, "{a} vs {b}");
}

#[test]
fn scenario_reports_match_known_figures() {
    let json = stdout_json(&rotcav(&["scenario", "--name", "scenario1"]));
    let gap = json["log10_cavity_to_free_excitation"]["value"].as_f64().unwrap();
    assert!((gap - 17.8333).abs() < 1e-3, "gap = {gap}");

    let json = stdout_json(&rotcav(&["scenario", "--name", "scenario2"]));
    let up = json["cavity_gamma_up"]["value"].as_f64().unwrap();
    let down = json["cavity_gamma_down"]["value"].as_f64().unwrap();
    assert!((up / down - 1.0).abs() < 1e-3);
}

#[test]
fn unknown_scenario_exits_with_code_2() {
    let out = rotcav(&["scenario", "--name", "scenario9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scenario9"));
}

#[test]
fn peaks_reports_the_analytic_summary() {
    let out = rotcav(&[
        "peaks", "--omega0", "1e7", "--omega-rot", "5e9", "--radius", "5e-8", "--d-rho", "1e-29",
        "--d-phi", "1e-29", "--d-z", "1e-29", "--q", "1e7", "--volume", "1e-14",
    ]);
    let json = stdout_json(&out);
    let star = json["excitation_peak"]["omega_c_star"].as_f64().unwrap();
    assert_eq!(star, 4.99e9);
    assert!(json["inertial_resonant_peak_per_s"].as_f64().unwrap() > 0.0);
    assert_eq!(json["coincidence"].as_str().unwrap(), "none");
}

#[test]
fn scan_writes_matching_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scan.toml");
    std::fs::write(
        &config,
        r#"
omega0 = 1e7
omega-rot = 5e9
radius = 5e-8
d-rho = 1e-29
d-phi = 1e-29
d-z = 1e-29
env = "cavity"
q = 1e7
volume = 1e-14
sweep = "omega-c"
lo = 4.9e9
hi = 5.1e9
grid = "linear"
points = 21
"#,
    )
    .unwrap();

    let csv_path = dir.path().join("out.csv");
    let json_path = dir.path().join("out.json");
    let csv_run = rotcav(&[
        "scan", "--config", config.to_str().unwrap(), "--out", csv_path.to_str().unwrap(),
        "--format", "csv",
    ]);
    assert!(csv_run.status.success());
    let json_run = rotcav(&[
        "scan", "--config", config.to_str().unwrap(), "--out", json_path.to_str().unwrap(),
        "--format", "json",
    ]);
    assert!(json_run.status.success());

    let csv_text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(!csv_text.contains('\r'), "CSV must use LF line endings");
    let mut lines = csv_text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("omega_c_rad_s,gamma_down_per_s,gamma_up_per_s"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);

    let records: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 21);
    for (row, record) in rows.iter().zip(records) {
        let first_cell: f64 = row.split(',').next().unwrap().parse().unwrap();
        let swept = record["sweep_value"].as_f64().unwrap();
        assert_eq!(first_cell, swept);
        assert_eq!(swept, record["inputs"]["omega_c"].as_f64().unwrap());
        let gamma_up_cell: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(gamma_up_cell, record["gamma_up_per_s"].as_f64().unwrap());
    }
}

#[test]
fn scan_rejects_unknown_config_keys_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(
        &config,
        "omega0 = 1e7\nomega-rot = 5e9\nenv = \"free\"\nsweep = \"omega-rot\"\nlo = 1e9\nhi = 2e9\ngrid = \"linear\"\npoints = 5\nbogus = 1\n",
    )
    .unwrap();
    let out = rotcav(&[
        "scan", "--config", config.to_str().unwrap(), "--out",
        dir.path().join("x.csv").to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn dynamics_is_deterministic_for_a_fixed_seed() {
    let args = [
        "dynamics", "--gamma-up", "2e3", "--gamma-down", "1e3", "--duration", "0.5", "--seed",
        "42", "--trajectories", "3",
    ];
    let first = rotcav(&args);
    let second = rotcav(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let json = stdout_json(&first);
    assert_eq!(json["trajectories"].as_array().unwrap().len(), 3);
    assert_eq!(
        json["trajectories"][0]["rng_algorithm"].as_str().unwrap(),
        "chacha12"
    );
}

#[test]
fn superluminal_orbit_exits_with_code_2() {
    let out = rotcav(&[
        "rates", "--omega0", "1e7", "--omega-rot", "1e10", "--radius", "1.0", "--d-z", "1e-29",
        "--env", "free",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
