//! End-to-end CLI contract: exit codes, stdout carrying exactly one JSON
//! document, stderr diagnostics, environment overrides and error paths.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_kbiframe")
}

fn tmp(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    p.push(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| {
        panic!("stdout is not a single JSON document: {e}\n---\n{text}")
    })
}

#[test]
fn gallery_then_certify_k_biframe() {
    let path = tmp("c4.json");
    let out = run(&["gallery", "--name", "ex_c4", "--out", &path]);
    assert!(out.status.success());

    let out = run(&["certify", "--in", &path]);
    assert_eq!(out.status.code(), Some(0), "K-biframe must exit 0");
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "certificate");
    assert_eq!(doc["certificate"]["is_k_biframe"], true);
    // the documented claimed bound A = 1 is flagged invalid
    assert_eq!(doc["claimed_check"]["a_valid"], false);
    let margin = doc["claimed_check"]["a_psd_margin"].as_f64().unwrap();
    assert!((margin + 6.0).abs() <= 1e-9, "margin = {margin}");
}

#[test]
fn certify_biframe_variant_exits_two_on_singular() {
    let path = tmp("s4.json");
    assert!(run(&["gallery", "--name", "ex_s_singular", "--out", &path])
        .status
        .success());
    let out = run(&["certify", "--in", &path, "--biframe"]);
    assert_eq!(out.status.code(), Some(2), "not a biframe: exit 2");
    let doc = stdout_json(&out);
    assert_eq!(doc["certificate"]["is_k_biframe"], false);
}

#[test]
fn certify_parseval_sets_flags() {
    let path = tmp("parseval.json");
    assert!(run(&["gallery", "--name", "parseval", "--n", "6", "--out", &path])
        .status
        .success());
    let out = run(&["certify", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["certificate"]["is_parseval"], true);
    assert_eq!(doc["claimed_check"]["a_valid"], true);
}

#[test]
fn certify_k_frame_variant() {
    let path = tmp("c4_kframe.json");
    assert!(run(&["gallery", "--name", "ex_c4", "--out", &path]).status.success());
    let out = run(&["certify", "--in", &path, "--k-frame"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["certificate"]["is_k_biframe"], true);
    let a = doc["certificate"]["a_opt"].as_f64().unwrap();
    assert!((a - 1.0).abs() <= 1e-8, "X against K is tight at 1, got {a}");
}

#[test]
fn bounds_prints_optimal_pair() {
    let path = tmp("c4_bounds.json");
    assert!(run(&["gallery", "--name", "ex_c4", "--out", &path]).status.success());
    let out = run(&["bounds", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let a = doc["a_opt"].as_f64().unwrap();
    let b = doc["b_opt"].as_f64().unwrap();
    assert!((a - 1.0 / 3.0).abs() <= 1e-8);
    assert!((b - 3.0).abs() <= 1e-9);
}

#[test]
fn douglas_on_shift_matrices_exits_two() {
    // write the two shift operators as matrix files
    let n = 4;
    let left = kbiframe::instances::left_shift(n).unwrap();
    let right = kbiframe::instances::right_shift(n).unwrap();
    let p1 = tmp("left.json");
    let p2 = tmp("right.json");
    std::fs::write(&p1, kbiframe::io::matrix_file_to_json(&left)).unwrap();
    std::fs::write(&p2, kbiframe::io::matrix_file_to_json(&right)).unwrap();

    let out = run(&["douglas", "--t1", &p1, "--t2", &p2]);
    assert_eq!(out.status.code(), Some(2), "not included: exit 2");
    let doc = stdout_json(&out);
    assert_eq!(doc["report"]["range_included"], false);
    let w = doc["report"]["witness"].as_array().unwrap();
    let w0 = w[0].as_array().unwrap();
    let re = w0[0].as_f64().unwrap();
    let im = w0[1].as_f64().unwrap();
    assert!((re * re + im * im).sqrt() > 0.9, "witness along e1");

    // reversed: R(right) ⊆ R(left) does hold on the truncation
    let out = run(&["douglas", "--t1", &p2, "--t2", &p1]);
    // right shift range = span{e2..en}; left shift range = span{e1..e_{n-1}}
    // e_n escapes, so this is excluded too
    assert_eq!(out.status.code(), Some(2));

    // identity through itself
    let id = kbiframe::ComplexMatrix::identity(n).unwrap();
    let p3 = tmp("id.json");
    std::fs::write(&p3, kbiframe::io::matrix_file_to_json(&id)).unwrap();
    let out = run(&["douglas", "--t1", &p3, "--t2", &p3]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn audit_counterexample_exits_two_with_witness() {
    let path = tmp("pc.json");
    assert!(run(&[
        "gallery",
        "--name",
        "perturbation_counterexample",
        "--out",
        &path
    ])
    .status
    .success());
    let out = run(&["audit", "--statement", "positive_perturbation", "--in", &path]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["claim_valid"], false);
    assert_eq!(doc["intermediate_valid"], false);
    assert!(doc["witness"]["vector"].is_array());
    // diagnostics went to stderr, stdout held only the document
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("witness"));
}

#[test]
fn audit_swap_on_gallery_passes() {
    let path = tmp("c4_swap.json");
    assert!(run(&["gallery", "--name", "ex_c4", "--out", &path]).status.success());
    let out = run(&["audit", "--statement", "swap", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["claim_valid"], true);
}

#[test]
fn audit_requires_t_where_needed() {
    let path = tmp("c4_need_t.json");
    assert!(run(&["gallery", "--name", "ex_c4", "--out", &path]).status.success());
    let out = run(&["audit", "--statement", "range_transfer", "--in", &path]);
    assert_eq!(out.status.code(), Some(1), "usage error: exit 1");
    assert!(String::from_utf8_lossy(&out.stderr).contains("needs a `t` operator"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["certify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--in"));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["gallery", "--name", "unknown_thing"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["certify", "--in", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_instance_reports_field() {
    let path = tmp("bad.json");
    std::fs::write(&path, r#"{"schema_version":"1","dim":"four"}"#).unwrap();
    let out = run(&["certify", "--in", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim"));
}

#[test]
fn env_tolerance_override_is_honored() {
    let path = tmp("skewish.json");
    // a mildly skew pair: residual around 5e-6
    let inst = {
        let mut base = kbiframe::instances::random_biframe(
            3,
            5,
            kbiframe::instances::Family::Rescale,
            12,
        )
        .unwrap();
        let eps = 5e-6;
        let mut bump = kbiframe::ComplexMatrix::identity(3).unwrap();
        bump.set(0, 1, num_complex::Complex64::new(0.0, eps));
        let y = kbiframe::frame::apply_operator_to_sequence(&bump, &base.pair.y).unwrap();
        base.pair = kbiframe::frame::BiframePair::new(base.pair.x.clone(), y).unwrap();
        base
    };
    std::fs::write(&path, kbiframe::io::instance_to_json(&inst)).unwrap();

    // default tolerance 1e-8 rejects the Hermitian residual
    let strict = run(&["certify", "--in", &path, "--biframe"]);
    assert_eq!(strict.status.code(), Some(2));

    // a loose override accepts it
    let loose = Command::new(bin())
        .args(["certify", "--in", &path, "--biframe"])
        .env("KBIFRAME_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(0));
}

#[test]
fn certificate_output_is_deterministic() {
    let path = tmp("det.json");
    assert!(run(&["gallery", "--name", "parseval", "--n", "8", "--out", &path])
        .status
        .success());
    let a = run(&["certify", "--in", &path]);
    let b = run(&["certify", "--in", &path]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gallery_stdout_matches_written_file() {
    let path = tmp("echo.json");
    let out = run(&["gallery", "--name", "shift", "--n", "4", "--out", &path]);
    assert!(out.status.success());
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), on_disk.trim());
}
