//! Binary-level tests: exit-status contract, validation messages, and
//! run-to-run determinism of the emitted files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pcops_bin() -> &'static str {
    env!("CARGO_BIN_EXE_pcops")
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_config(config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(pcops_bin())
        .arg("run")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("spawn pcops")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn quadratic_gd_runs_clean_and_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("quadratic_gd.json");
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    let ra = run_config(&cfg, &out_a, &[]);
    let rb = run_config(&cfg, &out_b, &[]);
    assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(rb.status.code(), Some(0));

    // trace files are byte-identical across runs
    for name in ["trace.csv", "trace.json"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    // reports are identical once the timestamp field is dropped
    let mut rep_a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.join("report.json")).unwrap()).unwrap();
    let mut rep_b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_b.join("report.json")).unwrap()).unwrap();
    rep_a.as_object_mut().unwrap().remove("timestamp_unix_ms");
    rep_b.as_object_mut().unwrap().remove("timestamp_unix_ms");
    assert_eq!(rep_a, rep_b);

    // and the per-check lines are printed
    let stdout = String::from_utf8_lossy(&ra.stdout);
    assert!(stdout.contains("PASS definition"));
    assert!(stdout.contains("PASS thm2-rate-bound"));
}

#[test]
fn bad_gamma_exits_2_naming_the_window() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&configs_dir().join("bad_gamma.json"), tmp.path(), &[]);
    assert_eq!(r.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(
        stderr.contains("(0, 2/L)") && stderr.contains("(0, 1)"),
        "window not named: {stderr}"
    );
}

#[test]
fn identity_any_checks_exits_0_with_zero_residuals() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&configs_dir().join("identity.json"), tmp.path(), &[]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("report.json")).unwrap())
            .unwrap();
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["worst_residual"].as_f64().unwrap(), 0.0);
        assert_eq!(check["passed"].as_bool(), Some(true));
    }
}

#[test]
fn parameter_windows_are_rejected_at_parse_time() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (
            "omega.json",
            r#"{
                "method": {"kind": "relaxed_projection", "omega": 2.0},
                "problem": {"kind": "sets", "a": {"kind": "ball", "center": [0.0, 0.0], "r": 1.0}, "seed": 1},
                "run": {"n": 10, "seed": 1}
            }"#,
            "(0, 2)",
        ),
        (
            "lambda.json",
            r#"{
                "method": {"kind": "proximal_point", "lambda": 0.0},
                "problem": {"kind": "separable", "g": {"kind": "l1", "weight": 1.0}, "dim": 2, "seed": 1},
                "run": {"n": 10, "seed": 1}
            }"#,
            "(0, inf)",
        ),
        (
            "alpha.json",
            r#"{
                "method": {"kind": "generalized_admm", "lambda": 1.0, "alpha": 1.0},
                "problem": {"kind": "lasso", "rows": 10, "cols": 5, "nonzeros": 2, "weight": 0.1, "seed": 1},
                "run": {"n": 10, "seed": 1}
            }"#,
            "(0, 1)",
        ),
        (
            "gamma.json",
            r#"{
                "method": {"kind": "forward_backward", "gamma": -0.5, "lambda": 1.0},
                "problem": {"kind": "lasso", "rows": 10, "cols": 5, "nonzeros": 2, "weight": 0.1, "seed": 1},
                "run": {"n": 10, "seed": 1}
            }"#,
            "(0, 2/L)",
        ),
    ];
    for (name, body, window) in cases {
        let cfg = write_config(tmp.path(), name, body);
        let r = run_config(&cfg, &tmp.path().join("out"), &[]);
        assert_eq!(r.status.code(), Some(2), "{name} should be rejected");
        let stderr = String::from_utf8_lossy(&r.stderr);
        assert!(
            stderr.contains(window),
            "{name}: window {window:?} not named in {stderr}"
        );
    }
}

#[test]
fn unknown_claim_id_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad_check.json",
        r#"{
            "method": {"kind": "identity"},
            "problem": {"kind": "point_space", "dim": 2, "seed": 0},
            "run": {"n": 10, "seed": 0},
            "checks": ["lemma7"]
        }"#,
    );
    let r = run_config(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(r.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(stderr.contains("lemma7"), "{stderr}");
    assert!(stderr.contains("known ids"), "{stderr}");
}

#[test]
fn malformed_json_reports_line_and_column() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "broken.json",
        "{\n  \"method\": {\"kind\": \"identity\"},,\n}",
    );
    let r = run_config(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(r.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn inapplicable_prox_inclusion_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "noprox.json",
        r#"{
            "method": {"kind": "gradient_descent", "gamma": 0.5},
            "problem": {"kind": "spd_quadratic", "dim": 4, "spectrum": [0.5, 2.0], "seed": 2},
            "run": {"n": 10, "seed": 2},
            "checks": ["prox-inclusion"]
        }"#,
    );
    let r = run_config(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("not applicable"));
}

#[test]
fn lasso_admm_config_runs_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run_config(&configs_dir().join("lasso_admm.json"), tmp.path(), &[]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let stdout = String::from_utf8_lossy(&r.stdout);
    assert!(stdout.contains("PASS thm2-rate-bound"), "{stdout}");
    assert!(stdout.contains("PASS prox-inclusion"), "{stdout}");
}

#[test]
fn unreachable_reference_exits_3() {
    // alternating projections between a ball and a tangent halfspace
    // converge sublinearly; the 1e-12 reference needed by thm2 is out of
    // reach within the iteration cap, which is a numeric failure
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "tangent.json",
        r#"{
            "method": {"kind": "alternating_projections"},
            "problem": {
                "kind": "sets",
                "a": {"kind": "ball", "center": [0.0, 0.0], "r": 1.0},
                "b": {"kind": "halfspace", "a": [1.0, 0.0], "b": -1.0},
                "seed": 4
            },
            "run": {"n": 100, "seed": 4},
            "checks": ["thm2"]
        }"#,
    );
    let r = run_config(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(
        r.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&r.stderr)
    );
    assert!(String::from_utf8_lossy(&r.stderr).contains("no convergence"));
}

#[test]
fn seed_override_changes_the_report_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let r = run_config(
        &configs_dir().join("quadratic_gd.json"),
        &out,
        &["--seed", "99", "--quiet"],
    );
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty(), "quiet run should print nothing");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["provenance"]["seed"].as_u64(), Some(99));
}

#[test]
fn pcops_out_env_fallback_is_used() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("from_env");
    let r = Command::new(pcops_bin())
        .arg("run")
        .arg(configs_dir().join("identity.json"))
        .env("PCOPS_OUT", &out)
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(out.join("report.json").exists());
}

#[test]
fn exit_status_reflects_synthetic_reports() {
    use pcops::verification::{ClaimCheck, Provenance, VerificationReport};
    use pcops_cli::runner::exit_code_for_report;
    let provenance = || Provenance {
        config_hash: "h".into(),
        seed: 0,
        build: "test".into(),
    };
    // all-pass report maps to 0
    let pass = VerificationReport::new(
        vec![
            ClaimCheck::new("a", 0.0, 1e-9, 1, ""),
            ClaimCheck::new("b", -1.0, 0.0, 1, ""),
        ],
        provenance(),
    );
    assert_eq!(exit_code_for_report(&pass), 0);
    // any failing check maps to 1
    let fail = VerificationReport::new(
        vec![
            ClaimCheck::new("a", 0.0, 1e-9, 1, ""),
            ClaimCheck::new("b", 1.0, 1e-9, 1, ""),
        ],
        provenance(),
    );
    assert_eq!(exit_code_for_report(&fail), 1);
    // empty report counts as all-passed
    let empty = VerificationReport::new(vec![], provenance());
    assert_eq!(exit_code_for_report(&empty), 0);
}
