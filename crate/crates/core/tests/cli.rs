//! Process-level tests of the `gpez` binary: exit-code discipline,
//! flag/file precedence, and byte-identical output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn gpez(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpez"))
        .args(args)
        .output()
        .expect("failed to spawn gpez")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("gpez-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn sweep_stdout_is_byte_identical_across_runs() {
    let args = ["--mode", "sweep", "--grid-points", "101"];
    let first = gpez(&args);
    let second = gpez(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# mode = sweep")));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 102); // header + 101 nodes
}

#[test]
fn flag_overrides_config_file() {
    let cfg_path = tmp_path("override.cfg");
    std::fs::write(&cfg_path, "mode = sweep\ngrid_points = 2001\n").unwrap();
    let out = gpez(&["--config", cfg_path.to_str().unwrap(), "--grid-points", "11"]);
    assert!(out.status.success());
    let rows = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows, 12);
    std::fs::remove_file(cfg_path).ok();
}

#[test]
fn cross_check_adds_companion_columns() {
    let out = gpez(&["--mode", "sweep", "--grid-points", "51", "--cross-check"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().find(|l| l.starts_with("r,")).unwrap();
    assert!(header.contains("psi_bvp_eps_0.0005"));
}

#[test]
fn energy_mode_writes_audit_and_summary() {
    let out = gpez(&[
        "--mode", "energy", "--r-inner", "1", "--r-outer", "2", "--eps", "0.01", "--pi", "0.01",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("quadrature,derived_closed_form"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("curvature energy"));
}

#[test]
fn missing_mode_exits_2() {
    let out = gpez(&["--pi", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("mode"));
}

#[test]
fn invalid_value_exits_3() {
    let out = gpez(&["--mode", "sweep", "--r-inner", "2", "--r-outer", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("r_outer"));
}

#[test]
fn unknown_mode_exits_4() {
    let out = gpez(&["--mode", "warp"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn gpe_non_convergence_exits_5_with_partial_output() {
    let path = tmp_path("partial.csv");
    let out = gpez(&[
        "--mode", "gpe", "--g", "1", "--n-atoms", "10", "--box-half-width", "8",
        "--grid-points", "201", "--tol", "1e-14", "--max-iters", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# converged = false"));
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() > 100);
    std::fs::remove_file(path).ok();
}

#[test]
fn unwritable_output_exits_6() {
    let out = gpez(&["--mode", "sweep", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn gpe_mode_reports_summary_on_stderr() {
    let out = gpez(&[
        "--mode", "gpe", "--g", "0", "--n-atoms", "1", "--box-half-width", "8",
        "--grid-points", "801", "--tol", "1e-8",
    ]);
    assert!(out.status.success());
    let diag = String::from_utf8(out.stderr).unwrap();
    assert!(diag.contains("mu = 4.99"), "stderr: {diag}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "x,psi,density"));
}
