//! End-to-end runs of the binary. Set UPDATE_GOLDEN=1 to rewrite tests/golden.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibwqed"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fibwqed")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn check_golden(name: &str, args: &[&str]) {
    let got = stdout_of(args);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name} drifted; rerun with UPDATE_GOLDEN=1 if intended");
}

#[test]
fn golden_sequence() {
    check_golden("sequence_1_2_k5.csv", &["sequence", "--p", "1", "--q", "2", "--k", "5"]);
}

#[test]
fn golden_vds_giant() {
    check_golden("vds_giant.csv", &["vds", "--kind", "giant", "--n0", "5", "--d", "6", "-N", "60"]);
}

#[test]
fn golden_effective_local_trio() {
    check_golden(
        "effective_local_trio.csv",
        &[
            "effective", "--p", "1", "--q", "2", "-N", "144", "--emitter", "local:10", "--emitter", "local:13",
            "--emitter", "local:15",
        ],
    );
}

#[test]
fn golden_vds_map() {
    check_golden("vds_map_1_1.csv", &["vds-map", "--p", "1", "--q", "1", "--dmax", "14"]);
}

#[test]
fn gapmap_marks_exactly_the_parity_class() {
    let csv = stdout_of(&["gapmap", "--pmax", "6", "--qmax", "6", "--tB", "0.2"]);
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (p, q): (u32, u32) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let gapped = f[4] == "1";
        assert_eq!(gapped, p % 2 == 1 && q % 2 == 0, "cell ({p},{q})");
        rows += 1;
    }
    assert_eq!(rows, 36);
}

#[test]
fn vds_map_has_no_odd_legs() {
    let csv = stdout_of(&["vds-map", "--p", "1", "--q", "1", "--dmax", "14"]);
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let d: usize = f[0].parse().unwrap();
        if d % 2 == 1 {
            assert_eq!(f[2], "0", "d={d} n0={}", f[1]);
        }
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["dynamics", "--p", "1", "--q", "2", "-N", "60", "--emitter", "local:10", "--emitter", "local:13", "--samples", "50"];
    let a = stdout_of(&[&["--threads", "1"], &args[..]].concat());
    let b = stdout_of(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(a, b);
}

#[test]
fn malformed_flags_exit_two_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = run(&["spectrum", "-N", "banana", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = run(&["vds", "--kind", "giant", "--n0", "5", "--d", "6", "--p", "0", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unsatisfied_condition_is_a_compute_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = run(&["vds", "--kind", "giant", "--n0", "9", "--d", "6", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    assert!(!o.stderr.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let args = ["spectrum", "-N", "89"];
    let o = run(&[&args[..], &["-o", out.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout_of(&args));
}
