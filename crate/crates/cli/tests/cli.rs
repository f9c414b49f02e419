//! Black-box tests of the `besovgrid` binary: hand-computed norm values,
//! degenerate grids, approximation of basis elements inside and outside the
//! sparse grid, the ε sweep, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use besovgrid_core::{build_basis, eval_1d, tabulate, FactorKind};

fn scratch_dir(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("besovgrid-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).expect("writable scratch file");
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besovgrid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn base_config(dim: usize) -> String {
    let zeros = vec!["0.0"; dim].join(", ");
    let ones = vec!["1.0"; dim].join(", ");
    format!(
        r#"{{
  "dim": {dim},
  "basis_order": 2,
  "delta1": {{"type": "weighted_l1", "s": [{zeros}]}},
  "delta2": {{"type": "weighted_l1", "s": [{ones}]}},
  "epsilon": 0.1,
  "b_w": 0.0,
  "p": 1.0,
  "q": 1.0,
  "max_level": 2,
  "domain_radius": 2.0,
  "quad_resolution": 8,
  "test_function": {{"name": "exp_l1", "a": 1.0}}
}}"#
    )
}

#[test]
fn norm_reports_hand_computed_values() {
    let dir = scratch_dir("norm");
    let config = dir.join("config.json");
    write(&config, &base_config(2));

    let cases = [
        ("[]", "0.00000000000e0"),
        (r#"[{"j": [0, 0], "m": [0, 0], "lambda": 1.0}]"#, "1.00000000000e0"),
        (
            r#"[{"j": [0, 0], "m": [0, 0], "lambda": 1.0},
                {"j": [1, 0], "m": [0, 0], "lambda": 1.0}]"#,
            // 1 + √2 to 12 significant digits.
            "2.41421356237e0",
        ),
    ];
    for (index, (coeffs, expected)) in cases.iter().enumerate() {
        let path = dir.join(format!("coeffs{index}.json"));
        write(&path, coeffs);
        let out = run(&["norm", path.to_str().unwrap(), "--config", config.to_str().unwrap()]);
        assert_eq!(stdout_of(&out).trim(), *expected, "case {index}");
    }
}

#[test]
fn grid_with_all_levels_empty_emits_header_only() {
    let dir = scratch_dir("empty-grid");
    let config = dir.join("config.json");
    // δ₂ = δ₁ kills the dyadic decay budget and ε = 2 exceeds even the
    // level-0 damping, so every threshold is negative.
    write(
        &config,
        &base_config(2)
            .replace(r#""s": [1.0, 1.0]"#, r#""s": [0.0, 0.0]"#)
            .replace(r#""epsilon": 0.1"#, r#""epsilon": 2.0"#)
            .replace(r#""b_w": 0.0"#, r#""b_w": 1.0"#),
    );
    let out_dir = dir.join("out");
    let out = run(&[
        "grid",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    stdout_of(&out);
    let csv = std::fs::read_to_string(out_dir.join("centers.csv")).unwrap();
    assert_eq!(csv, "x1,x2,j1,j2,m1,m2\n");
    let grid: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("grid.json")).unwrap())
            .unwrap();
    assert_eq!(grid["total_points"], 0);
    assert_eq!(grid["levels"].as_array().unwrap().len(), 0);
}

fn element_config(j: u32, m: i64) -> String {
    format!(
        r#"{{
  "dim": 1,
  "basis_order": 3,
  "delta1": {{"type": "weighted_l1", "s": [0.0]}},
  "delta2": {{"type": "weighted_l1", "s": [1.0]}},
  "epsilon": 0.1,
  "b_w": 0.5,
  "p": 1.0,
  "q": 1.0,
  "max_level": 3,
  "domain_radius": 15.0,
  "quad_resolution": 8,
  "test_function": {{"name": "basis_element", "j": [{j}], "m": [{m}]}}
}}"#
    )
}

fn approx_report(config: &Path) -> serde_json::Value {
    let out = run(&["approx", "--config", config.to_str().unwrap()]);
    serde_json::from_str(&stdout_of(&out)).expect("report is JSON")
}

#[test]
fn approx_reproduces_a_grid_member_to_quadrature_noise() {
    let dir = scratch_dir("inside");
    let config = dir.join("config.json");
    // Stored level 1, translation 0: weighted distance 0 ≤ T(1) = ln 5,
    // so the element is retained and f̃ = f up to analysis quadrature.
    write(&config, &element_config(1, 0));
    let report = approx_report(&config);
    let measured = report["measured_lpw_error"].as_f64().unwrap();
    assert!(
        measured < 1e-3,
        "retained element should reproduce exactly, measured {measured:.3e}"
    );
}

#[test]
fn approx_reports_the_weighted_norm_of_an_excluded_element() {
    let dir = scratch_dir("outside");
    let config = dir.join("config.json");
    // Stored level 1, translation 10: weighted distance 0.5·10 = 5 exceeds
    // T(1) = ln 5 ≈ 1.61, so truncation drops the element entirely and the
    // measured error is the weighted L¹ norm of ψ(· − 10).
    write(&config, &element_config(1, 10));
    let report = approx_report(&config);
    let measured = report["measured_lpw_error"].as_f64().unwrap();

    let basis = build_basis(3).unwrap();
    let table = tabulate(&basis, 12).unwrap();
    let step = 0.5f64.powi(12);
    let points = (basis.support_length / step).round() as i64;
    let mut oracle = 0.0;
    for t in 0..=points {
        let x = t as f64 * step;
        oracle += eval_1d(&table, FactorKind::Wavelet, 0, 10, x + 10.0).abs()
            * (0.5 * (x + 10.0)).exp();
    }
    oracle *= step;

    let relative = (measured - oracle).abs() / oracle;
    assert!(
        relative < 0.02,
        "measured {measured:.4} vs direct norm quadrature {oracle:.4} \
         (relative {relative:.3e})"
    );
    let truncated = report["quasinorm_truncated"].as_f64().unwrap();
    assert!(truncated < 1e-6, "excluded element left quasinorm {truncated:.2e}");
}

#[test]
fn gaussian_errors_shrink_with_epsilon() {
    let dir = scratch_dir("sweep");
    let base = r#"{
  "dim": 2,
  "basis_order": 3,
  "delta1": {"type": "weighted_l1", "s": [0.0, 0.0]},
  "delta2": {"type": "weighted_l1", "s": [1.0, 1.0]},
  "epsilon": EPS,
  "b_w": 1.0,
  "p": 1.0,
  "q": 1.0,
  "max_level": 4,
  "domain_radius": 4.0,
  "quad_resolution": 7,
  "test_function": {"name": "gaussian", "a": 1.0}
}"#;
    let mut previous = f64::INFINITY;
    for epsilon in ["0.1", "0.03", "0.01"] {
        let config = dir.join(format!("config{epsilon}.json"));
        write(&config, &base.replace("EPS", epsilon));
        let report = approx_report(&config);
        let measured = report["measured_lpw_error"].as_f64().unwrap();
        assert!(
            measured <= previous,
            "measured error grew from {previous:.4} to {measured:.4} at eps={epsilon}"
        );
        previous = measured;
    }
}

#[test]
fn function_overrides_replace_the_configured_test_function() {
    let dir = scratch_dir("override");
    let config = dir.join("config.json");
    write(&config, &element_config(1, 0));
    // Override the configured basis element with a sharper analytic
    // function; the report must reflect a nonzero truncation error.
    let out = run(&[
        "approx",
        "--config",
        config.to_str().unwrap(),
        "--function",
        "exp_l1",
        "--param",
        "a=2.0",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let measured = report["measured_lpw_error"].as_f64().unwrap();
    assert!(measured > 1e-3, "exp_l1 should not be reproduced exactly: {measured:.3e}");
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    let dir = scratch_dir("exit2");
    let config = dir.join("config.json");
    write(&config, &base_config(1));

    // Malformed JSON.
    let broken = dir.join("broken.json");
    write(&broken, "{ not json");
    let out = run(&["grid", "--config", broken.to_str().unwrap(), "--out", "/tmp/x"]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown field.
    let unknown = dir.join("unknown.json");
    write(&unknown, &base_config(1).replace("\"dim\"", "\"dimension_count\""));
    let out = run(&["grid", "--config", unknown.to_str().unwrap(), "--out", "/tmp/x"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing coefficient file.
    let out = run(&["norm", "/nonexistent/coeffs.json", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Zero weight rate cannot build a grid.
    let out = run(&["grid", "--config", config.to_str().unwrap(), "--out", "/tmp/x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undersampled_quadrature_exits_with_code_three() {
    let dir = scratch_dir("exit3");
    let config = dir.join("config.json");
    // max_level 3 needs quadrature resolution at least 5.
    write(
        &config,
        &element_config(1, 0).replace(r#""quad_resolution": 8"#, r#""quad_resolution": 4"#),
    );
    let out = run(&["approx", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("too coarse"),
        "diagnostic should name the undersampling"
    );
}
