//! End-to-end tests of the `stabtree` binary: determinism guarantees,
//! config-file precedence, validation failures, and file output.

use std::path::Path;
use std::process::{Command, Output};

fn stabtree(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stabtree"));
    cmd.args(args).env_remove("STABTREE_THREADS");
    cmd
}

fn run_ok(args: &[&str]) -> String {
    let out = stabtree(args).output().expect("spawn stabtree");
    assert!(
        out.status.success(),
        "stabtree {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn run_err(args: &[&str]) -> Output {
    let out = stabtree(args).output().expect("spawn stabtree");
    assert!(!out.status.success(), "stabtree {args:?} unexpectedly passed");
    out
}

#[test]
fn identical_configs_are_byte_identical_across_thread_counts() {
    let args = [
        "sweep",
        "bp",
        "--code",
        "rep3",
        "--mode",
        "binary-x",
        "--grid",
        "0.05,0.15",
        "--depths",
        "1..2",
        "--trials",
        "400",
        "--seed",
        "9",
    ];
    let single = stabtree(&args)
        .env("STABTREE_THREADS", "1")
        .output()
        .expect("spawn stabtree");
    let quad = stabtree(&args)
        .env("STABTREE_THREADS", "4")
        .output()
        .expect("spawn stabtree");
    assert!(single.status.success() && quad.status.success());
    assert_eq!(single.stdout, quad.stdout, "thread count leaked into output");
    assert!(!single.stdout.is_empty());
    let again = run_ok(&args);
    assert_eq!(again.into_bytes(), single.stdout, "reruns must reproduce");
}

#[test]
fn explicit_flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bp.conf");
    std::fs::write(
        &conf,
        "code = rep3\nmode = binary-x\np = 0.2\ndepth = 1\ntrials = 300\nseed = 4\n",
    )
    .unwrap();
    let conf = conf.to_str().unwrap();
    let from_file = run_ok(&["bp", "--config", conf]);
    assert!(from_file.contains("# noise: independent-xz p=0.2"));
    let overridden = run_ok(&["bp", "--config", conf, "--p", "0.1"]);
    assert!(overridden.contains("# noise: independent-xz p=0.1"));
    let direct = run_ok(&[
        "bp", "--code", "rep3", "--mode", "binary-x", "--p", "0.1", "--depth", "1", "--trials",
        "300", "--seed", "4",
    ]);
    assert_eq!(overridden, direct, "config-file runs must match flag runs");
}

#[test]
fn stochastic_runs_demand_a_seed() {
    let out = run_err(&[
        "bp", "--code", "rep3", "--p", "0.1", "--depth", "1", "--trials", "100",
    ]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("--seed"), "missing-seed error should name the flag");
}

#[test]
fn validate_lists_every_violation_of_a_broken_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.code");
    std::fs::write(
        &path,
        "name: broken\nb: 2\nstabilizer: ZZ\nlogical_x: XI\nlogical_z: XX\n",
    )
    .unwrap();
    let out = run_err(&["codes", "validate", path.to_str().unwrap()]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("invalid"), "stderr was: {msg}");
}

#[test]
fn shown_codes_validate_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("steane.code");
    run_ok(&["codes", "show", "--code", "steane7", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# stabtree"), "header comment retained");
    assert!(text.contains("logical_x: IIIXXXI"));
    let verdict = run_ok(&["codes", "validate", path.to_str().unwrap()]);
    assert!(verdict.contains("ok: steane7"));
}

#[test]
fn reports_land_in_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alpha.csv");
    let stdout = run_ok(&["alpha", "--code", "rep3", "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty(), "--out should silence stdout");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("degree,coefficient,numerator,denominator"));
    assert!(text.contains("2,3.00000000000e0,3,1"), "majority-3 quadratic term");
    assert!(text.contains("3,-2.00000000000e0,-2,1"), "majority-3 cubic term");
}

#[test]
fn unknown_codes_and_bad_grids_fail_with_field_names() {
    let out = run_err(&["alpha", "--code", "noSuchCode99"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown code"));
    let out = run_err(&[
        "sweep", "classical", "--code", "rep3", "--grid", "0.4:0.1:0.1", "--depths", "1",
        "--trials", "10", "--seed", "1",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid start exceeds stop"));
    let out = run_err(&[
        "classical", "--stat", "tvd", "--code", "rep3", "--p", "0.1", "--depth", "9",
    ]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("exceeding the cap"), "resource refusals state the cap: {msg}");
}

#[test]
fn de_reports_one_row_per_level() {
    let text = run_ok(&["de", "--decoder", "bell", "--p", "0.004", "--depth", "5"]);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .collect();
    assert_eq!(rows[0], "t,q_x,q_z,mu_x,mu_z,delta_x,delta_z");
    assert_eq!(rows.len(), 7, "header plus levels 0..=5");
    let exact = run_ok(&[
        "de", "--decoder", "one-bit", "--code", "rep2", "--px", "0.003", "--depth", "3",
    ]);
    assert_eq!(
        exact.lines().filter(|l| !l.starts_with('#')).count(),
        5,
        "header plus levels 0..=3"
    );
}

#[test]
fn helper_files_are_cleaned_up() {
    // tempdir-based tests above must not leave droppings in the workspace;
    // this guards the test hygiene itself.
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    for entry in std::fs::read_dir(here).unwrap() {
        let name = entry.unwrap().file_name();
        let name = name.to_string_lossy();
        assert!(
            !name.ends_with(".csv") && !name.ends_with(".code") && !name.ends_with(".conf"),
            "stray artifact {name}"
        );
    }
}
