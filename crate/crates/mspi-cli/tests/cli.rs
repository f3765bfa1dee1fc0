//! End-to-end checks of the `mspi` binary: exit codes, file outputs and
//! byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn mspi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mspi"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn code_validate_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(&["code", "validate", "--code", "bb-144"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("n=144 k=12"));
}

#[test]
fn code_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(
        &["code", "export", "--code", "bb-72", "--out-dir", "."],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let hx = std::fs::read_to_string(dir.path().join("bb-72.hx.alist")).unwrap();
    let hz = std::fs::read_to_string(dir.path().join("bb-72.hz.alist")).unwrap();
    let code = mspi_core::code::preset("bb-72").unwrap();
    assert_eq!(mspi_core::alist::import_alist(&hx).unwrap(), *code.h_x());
    assert_eq!(mspi_core::alist::import_alist(&hz).unwrap(), *code.h_z());
    assert!(dir.path().join("bb-72.manifest.json").exists());
}

#[test]
fn code_spec_file_and_non_commuting_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(
        &good,
        "family = \"circulant\"\nsize = 7\na_powers = [0, 1, 3]\nb_powers = [0, 2, 3]\n",
    )
    .unwrap();
    let out = mspi(&["code", "validate", "--code", good.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("n=14"));

    // Non-commuting blocks come from an alist pair that is not two-block.
    let code = mspi_core::code::preset("bb-72").unwrap();
    std::fs::write(dir.path().join("hx.alist"), mspi_core::alist::export_alist(code.h_x())).unwrap();
    // Mismatched H_Z: reuse H_X, which is not [B^T | A^T].
    std::fs::write(dir.path().join("hz.alist"), mspi_core::alist::export_alist(code.h_x())).unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "family = \"alist\"\nhx_path = \"hx.alist\"\nhz_path = \"hz.alist\"\n").unwrap();
    let out = mspi(&["code", "validate", "--code", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sim_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(
        &[
            "sim", "--code", "bb-72", "--variant", "nms", "--alphas", "0.05", "--trials", "0",
            "--out", "s.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sim_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sim", "--code", "bb-72", "--variant", "ms-pi", "--beta", "0.875", "--iters", "50",
        "--alphas", "0.04,0.06,0.08", "--trials", "500", "--seed", "7",
    ];
    let mut first = args.to_vec();
    first.extend(["--workers", "1", "--out", "a.csv"]);
    let mut second = args.to_vec();
    second.extend(["--workers", "4", "--out", "b.csv"]);
    assert!(mspi(&first, dir.path()).status.success());
    assert!(mspi(&second, dir.path()).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "worker count changed the CSV bytes");

    // Same invocation twice: identical bytes, including the JSON mirror.
    let mut third = args.to_vec();
    third.extend(["--workers", "4", "--out", "c.csv"]);
    assert!(mspi(&third, dir.path()).status.success());
    let c = std::fs::read(dir.path().join("c.csv")).unwrap();
    assert_eq!(b, c);
    let bj = std::fs::read(dir.path().join("b.json")).unwrap();
    let cj = std::fs::read(dir.path().join("c.json")).unwrap();
    assert_eq!(bj, cj);

    let csv = String::from_utf8(a).unwrap();
    assert_eq!(csv.lines().count(), 4, "header plus one row per alpha");
    assert!(csv.starts_with("alpha,trials,"));
    // LER should not decrease with alpha on this range.
    let lers: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(lers[0] <= lers[1] && lers[1] <= lers[2], "lers: {lers:?}");
}

#[test]
fn analyze_eigen_prints_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(&["analyze", "eigen", "--w", "8"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1, +1.7320508i, -1.7320508i, -3");
}

#[test]
fn analyze_recursion_classifies_and_rejects_odd_w() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(
        &[
            "analyze", "recursion", "--w", "6", "--f", "3", "--g", "0", "--rule", "ms-pi",
            "--iters", "20",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("classification: ConvergedPattern"), "{text}");
    assert!(text.contains("iter,a_y,a_g,q_Y1,q_G0"));

    let out = mspi(
        &["analyze", "recursion", "--w", "5", "--f", "2", "--g", "0", "--rule", "ms"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_recursion_writes_csv_with_classification_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspi(
        &[
            "analyze", "recursion", "--w", "8", "--f", "3", "--g", "1", "--rule", "ms-pi",
            "--iters", "30", "--out", "traj.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    assert!(csv.starts_with("iter,a_y,b_y,c_y,d_y,a_g,b_g,c_g,d_g,q_Y1,q_G0,q_Y0,q_G1\n"));
    assert!(csv.lines().last().unwrap().starts_with("# classification=ConvergedPattern"));
    assert!(dir.path().join("traj.csv.manifest.json").exists());
}

#[test]
fn decode_zero_syndrome() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "0".repeat(36) + "\n").unwrap();
    let out = mspi(
        &["decode", "--code", "bb-72", "--syndrome-file", "s.txt", "--variant", "nms"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("matched: true"));
    assert!(text.contains("iterations: 0"));
    assert!(text.contains("estimate_weight: 0"));
}

#[test]
fn decode_weight_one_error_is_degenerate_success() {
    let dir = tempfile::tempdir().unwrap();
    let mut bits = vec![b'0'; 144];
    bits[17] = b'1';
    std::fs::write(dir.path().join("e.txt"), bits).unwrap();
    let out = mspi(
        &[
            "decode", "--code", "bb-144", "--error-file", "e.txt", "--variant", "nms",
            "--iters", "50",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("classification: DegenerateSuccess"));
}

#[test]
fn decode_wrong_length_syndrome_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "0101\n").unwrap();
    let out = mspi(
        &["decode", "--code", "bb-72", "--syndrome-file", "s.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decode_strict_reports_failure_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // All checks violated is not matchable by plain MS in two iterations.
    std::fs::write(dir.path().join("s.txt"), "1".repeat(36) + "\n").unwrap();
    let out = mspi(
        &[
            "decode", "--code", "bb-72", "--syndrome-file", "s.txt", "--variant", "ms",
            "--iters", "2", "--strict",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("matched: false"));
}

#[test]
fn pi_block_flag_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "0".repeat(36) + "\n").unwrap();
    let out = mspi(
        &[
            "decode", "--code", "bb-72", "--syndrome-file", "s.txt", "--variant", "nms",
            "--pi-block", "green",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "pi block with nms must be rejected");
}
