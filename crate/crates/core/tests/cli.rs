use std::path::Path;
use std::process::{Command, Output};

use cnoidal::cli::{EXIT_DOMAIN, EXIT_OK, EXIT_UNSTABLE, EXIT_VERIFY_FAILED};
use serde_json::Value;

fn cnoidal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnoidal"))
        .args(args)
        .env_remove("CNOIDAL_TOL")
        .output()
        .unwrap()
}

fn code(out: &Output) -> u8 {
    out.status.code().unwrap() as u8
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_reproduce_the_figure_set() {
    let out = cnoidal(&["params"]);
    assert_eq!(code(&out), EXIT_OK);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["system"], "KdV-KdV");
    assert_eq!(v["B"].as_f64(), Some(0.625));
    assert_eq!(v["omega"].as_f64(), Some(-21.0 / 64.0));
    assert_eq!(v["ratio_check"], true);
    assert_eq!(v["d"].as_array().unwrap().len(), 3);
}

#[test]
fn params_output_verifies_without_drift() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("params.json");
    for system in ["kk", "bb", "kb", "bk"] {
        assert_eq!(
            code(&cnoidal(&["params", "--system", system, "-o", path(&file)])),
            EXIT_OK
        );
        let out = cnoidal(&["verify", "--from", path(&file), "--pde"]);
        assert_eq!(
            code(&out),
            EXIT_OK,
            "{system}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn perturbed_coefficient_fails_verification() {
    let out = cnoidal(&["verify", "--perturb", "d2=1e-3"]);
    assert_eq!(code(&out), EXIT_VERIFY_FAILED);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = v[0]["reports"].as_array().unwrap();
    assert_eq!(reports[0]["check"], "coefficients");
    assert_eq!(reports[0]["passed"], false);
}

#[test]
fn invalid_wave_speed_is_a_domain_error() {
    let out = cnoidal(&["params", "--system", "bk", "--sigma", "3"]);
    assert_eq!(code(&out), EXIT_DOMAIN);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
}

#[test]
fn infeasible_branch_alone_is_a_domain_error() {
    assert_eq!(code(&cnoidal(&["params", "--sign", "-"])), EXIT_DOMAIN);
}

#[test]
fn runaway_simulation_exits_with_instability() {
    let out = cnoidal(&["simulate", "--dt", "5", "--t-end", "500", "--no-dealias"]);
    assert_eq!(code(&out), EXIT_UNSTABLE);
}

#[test]
fn simulate_writes_the_time_series() {
    let out = cnoidal(&[
        "simulate",
        "--modes",
        "32",
        "--dt",
        "1e-2",
        "--t-end",
        "0.1",
        "--outputs",
        "2",
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,err_u_linf,err_v_linf,mass_drift"));
    assert_eq!(lines.filter(|l| l.split(',').count() == 4).count(), 3);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "system = kb\nsigma = 2.5\nm = 0.3\n").unwrap();
    let from_file: Value =
        serde_json::from_slice(&cnoidal(&["params", "--config", path(&cfg)]).stdout).unwrap();
    assert_eq!(from_file["system"], "KdV-BBM");
    assert_eq!(from_file["sigma"].as_f64(), Some(2.5));
    assert_eq!(from_file["m"].as_f64(), Some(0.3));
    let flagged: Value = serde_json::from_slice(
        &cnoidal(&["params", "--config", path(&cfg), "--sigma", "2"]).stdout,
    )
    .unwrap();
    assert_eq!(flagged["sigma"].as_f64(), Some(2.0));
}

#[test]
fn tolerance_environment_variable_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_cnoidal"))
        .args(["verify"])
        .env("CNOIDAL_TOL", "coefficients=1e-30")
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_VERIFY_FAILED);
}

#[test]
fn figures_and_sample_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&cnoidal(&[
            "figures",
            "--out-dir",
            path(dir.path()),
            "-n",
            "11"
        ])),
        EXIT_OK
    );
    for slug in ["kdv-kdv", "bbm-bbm", "kdv-bbm", "bbm-kdv"] {
        let text = std::fs::read_to_string(dir.path().join(format!("figure_{slug}.csv"))).unwrap();
        assert_eq!(text.lines().next(), Some("xi,f,g,u_re,u_im,v"));
        assert_eq!(text.lines().count(), 12);
    }
    let out = cnoidal(&["sample", "-n", "5", "--system", "bb"]);
    assert_eq!(code(&out), EXIT_OK);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}

#[test]
fn catalog_lists_every_family() {
    let out = cnoidal(&["catalog", "--system", "kb"]);
    assert_eq!(code(&out), EXIT_OK);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn sweep_leaves_infeasible_points_unjudged() {
    let out = cnoidal(&[
        "sweep", "--param", "m", "--from", "0.2", "--to", "0.8", "--steps", "3",
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 3);
    assert_eq!(rows.iter().filter(|r| r.ends_with(',')).count(), 3);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(code(&cnoidal(&["params", "--bogus"])), EXIT_DOMAIN);
}
