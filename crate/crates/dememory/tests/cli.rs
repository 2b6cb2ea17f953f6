use std::path::Path;
use std::process::{Command, Output};

use dememory_core::PolicyId;

fn dememory(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dememory"))
        .args(args)
        .current_dir(dir)
        .env_remove("DEMEMORY_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stats(out: &str) -> Vec<&str> {
    out.lines()
        .filter(|l| {
            !l.starts_with("elapsed:") && !l.starts_with("seed:") && !l.starts_with("indexes:")
        })
        .collect()
}

#[test]
fn compat_run_is_reproducible_modulo_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dememory(
        dir.path(),
        &["B", "10", "0", "0", "100", "1000", "--seed", "5"],
    );
    let b = dememory(
        dir.path(),
        &["B", "10", "0", "0", "100", "1000", "--seed", "5"],
    );
    assert!(a.status.success());
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with("elapsed:"))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    let log = std::fs::read_to_string(dir.path().join("dememory.log")).unwrap();
    assert_eq!(log.lines().count(), 2);
}

#[test]
fn default_seed_is_disclosed() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(dir.path(), &["A", "10", "0", "0", "100", "50"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("seed: 20151201 (default)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn show_process_and_debug_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(dir.path(), &["B", "10", "1", "1", "100", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("#0 R "));
    assert!(out.contains("move page "));
    // 5 snapshots of 30 slots each
    assert_eq!(out.lines().filter(|l| l.starts_with("L1[0] ")).count(), 5);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("L3[9] empty")).count(),
        5
    );
}

#[test]
fn usage_errors_exit_nonzero_without_logging() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(dir.path(), &["Z", "10", "1", "0", "100", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("algorithm"), "{err}");
    assert!(err.contains("usage:"));
    assert!(!dir.path().join("dememory.log").exists());

    let o = dememory(dir.path(), &["B", "10", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_policies_and_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(dir.path(), &["--help"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for p in PolicyId::ALL {
        assert!(out.contains(p.cli_name()));
    }
    for s in ["simulate", "sweep", "gen-trace"] {
        assert!(out.contains(s));
    }
}

#[test]
fn gen_trace_then_simulate_matches_inline() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(
        dir.path(),
        &[
            "gen-trace",
            "--indexes",
            "40",
            "--refs",
            "600",
            "--seed",
            "11",
            "-o",
            "t.trace",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let from_file = dememory(
        dir.path(),
        &[
            "simulate", "-p", "fifo-n", "--frames", "4", "--trace", "t.trace", "--no-log",
        ],
    );
    let inline = dememory(
        dir.path(),
        &[
            "simulate",
            "-p",
            "fifo-n",
            "--frames",
            "4",
            "--indexes",
            "40",
            "--refs",
            "600",
            "--seed",
            "11",
            "--no-log",
        ],
    );
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    assert_eq!(stats(&stdout(&from_file)), stats(&stdout(&inline)));
    assert!(!dir.path().join("dememory.log").exists());
}

#[test]
fn simulate_with_explicit_levels_and_env_log() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dememory"))
        .args([
            "simulate", "-p", "nru-n", "--level", "5:1", "--level", "5:4", "--refs", "200",
        ])
        .current_dir(dir.path())
        .env("DEMEMORY_LOG", "custom.log")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("levels: 2 (frames 5:5, speeds 1:4)"));
    let log = std::fs::read_to_string(dir.path().join("custom.log")).unwrap();
    assert!(log.contains(",NRU_N,2,5:5,"));
}

#[test]
fn missing_trace_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(
        dir.path(),
        &["simulate", "-p", "lru", "--trace", "nope.trace"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.trace"));
    assert!(!dir.path().join("dememory.log").exists());
}

#[test]
fn setup_error_for_invalid_combination() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(dir.path(), &["simulate", "-p", "aging-n", "--level", "4:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 2 levels"));
}

#[test]
fn sweep_overwrites_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.csv"), "stale\n").unwrap();
    let o = dememory(
        dir.path(),
        &[
            "sweep", "--axis", "frames", "--points", "5,10", "--seeds", "2", "-o", "s.csv",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(csv.starts_with("axis,axis_value,policy,seed,"));
    assert!(!csv.contains("stale"));
    // 2 points x 2 policies x (2 seeds + 1 aggregate) + header
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn perturbed_control_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o = dememory(
        dir.path(),
        &[
            "sweep",
            "--perturbed-control",
            "--refs",
            "2000",
            "--seeds",
            "3",
            "-o",
            "p.csv",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(stdout(&o).contains("AGING_N_PERTURBED mean ratio"));
}
