//! End-to-end tests of the `wpdkit` binary: exit codes, error objects,
//! deterministic output, and JSON shapes.

use std::path::Path;
use std::process::{Command, Output};

fn wpdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpdkit"))
        .args(args)
        .output()
        .expect("failed to spawn wpdkit")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn stderr_error(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr is empty");
    serde_json::from_str(line).expect("stderr is not a JSON error object")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn wpd_on_builtin_example_is_valid_json() {
    let out = wpdkit(&["wpd", "--example", "ums-x"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["grid"], serde_json::json!([0.0, 1.0, 2.0]));
    assert_eq!(v["degree"], 0);
    assert!(v["bars"].as_array().is_some_and(|b| !b.is_empty()));
    let total: f64 = v["flip"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["mass"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9, "flip masses sum to {total}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["compare", "--example", "ums", "--degree", "0", "--p", "2"];
    let a = wpdkit(&args);
    let b = wpdkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "outputs differ between identical runs");
}

#[test]
fn malformed_csv_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "0,1\n1,zebra\n");
    let out = wpdkit(&["wpd", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_error(&out);
    assert_eq!(err["error"]["kind"], "parse");
    let msg = err["error"]["message"].as_str().unwrap();
    assert!(msg.contains("line 2"), "message lacks line number: {msg}");
}

#[test]
fn missing_file_exits_2_and_names_the_path() {
    let out = wpdkit(&["gdd", "--input", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_error(&out);
    assert_eq!(err["error"]["kind"], "io");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("/definitely/not/here.csv"));
}

#[test]
fn asymmetric_matrix_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "asym.csv", "0,1\n2,0\n");
    let out = wpdkit(&["wpd", "--input", &input, "--format", "matrix"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_error(&out)["error"]["kind"], "validation");
}

#[test]
fn exceeded_cap_exits_4_and_names_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "five.csv", "0,1,2,3,4\n1,0,1,2,3\n2,1,0,1,2\n3,2,1,0,1\n4,3,2,1,0\n");
    let out = wpdkit(&[
        "compare", "--input", &input, "--input2", &input, "--cap", "6",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr_error(&out);
    assert_eq!(err["error"]["kind"], "cap_exceeded");
    assert!(err["error"]["message"].as_str().unwrap().contains("cap 6"));
}

#[test]
fn verify_example_passes_and_reports_each_check() {
    let out = wpdkit(&["verify", "--example", "ums"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS]"), "no pass line in: {text}");
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("OK: 1 of 1"));
}

#[test]
fn compare_identical_inputs_gives_zero_distances() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "tri.csv", "0,1,1\n1,0,1\n1,1,0\n");
    let out = wpdkit(&[
        "compare", "--input", &input, "--input2", &input, "--p", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for m in v["distances"].as_array().unwrap() {
        let value = m["value"].as_f64().unwrap();
        let metric = m["metric"].as_str().unwrap();
        if m["mode"] == "exact" {
            assert!(value.abs() < 1e-9, "{metric} = {value} on identical inputs");
        }
    }
}

#[test]
fn single_point_space_yields_empty_diagram_and_dirac_flip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.csv", "0\n");
    let out = wpdkit(&["wpd", "--input", &input, "--format", "matrix"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["bars"], serde_json::json!([]));
    let flip = v["flip"].as_array().unwrap();
    assert_eq!(flip.len(), 1);
    assert_eq!(flip[0]["interval"], serde_json::json!([0.0, 0.0]));
    assert_eq!(flip[0]["mass"], 1.0);
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gdd.json");
    let to_stdout = wpdkit(&["gdd", "--example", "boutin-kemper-x"]);
    let to_file = wpdkit(&[
        "gdd", "--example", "boutin-kemper-x", "--output", path.to_str().unwrap(),
    ]);
    assert!(to_stdout.status.success() && to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn filtration_includes_weights_and_optional_zb_table() {
    let out = wpdkit(&["filtration", "--example", "ums-y", "--zb-degree", "0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["simplices"].as_array().is_some_and(|s| !s.is_empty()));
    assert!(v["weights"].as_array().is_some());
    assert_eq!(v["zb"]["degree"], 0);
    let without = wpdkit(&["filtration", "--example", "ums-y"]);
    let v2 = stdout_json(&without);
    assert!(v2.get("zb").is_none(), "zb present without --zb-degree");
}

#[test]
fn unknown_example_and_suite_exit_3() {
    for args in [
        ["wpd", "--example", "nope"].as_slice(),
        ["compare", "--example", "nope"].as_slice(),
        ["verify", "--example", "nope"].as_slice(),
        ["verify", "--suite", "nope"].as_slice(),
        ["compare", "--example", "ums", "--suite", "nope"].as_slice(),
    ] {
        let out = wpdkit(args);
        assert_eq!(out.status.code(), Some(3), "args: {args:?}");
        assert_eq!(stderr_error(&out)["error"]["kind"], "validation");
    }
}

#[test]
fn verify_all_flag_runs_the_full_suite() {
    let out = wpdkit(&["verify", "--all", "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("OK: 9 of 9"), "unexpected summary: {text}");
}

#[test]
fn ums_stability_inequalities_all_hold() {
    let out = wpdkit(&[
        "compare", "--example", "ums", "--p", "inf", "--degree", "0", "--suite", "stability",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    for c in v["stability"]["checks"].as_array().unwrap() {
        assert_eq!(c["verdict"], "holds", "check {}", c["name"]);
    }
}

#[test]
fn boutin_kemper_pair_has_zero_gdd_distance_but_positive_displacement() {
    let out = wpdkit(&["compare", "--example", "boutin-kemper", "--degree", "0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let get = |name: &str| {
        v["distances"]
            .as_array()
            .unwrap()
            .iter()
            .find(|m| m["metric"] == name)
            .unwrap_or_else(|| panic!("{name} missing"))
            .clone()
    };
    let gdd = get("wasserstein_gdd");
    assert_eq!(gdd["mode"], "exact");
    assert!(gdd["value"].as_f64().unwrap().abs() < 1e-9);
    let defo = get("d_defo");
    assert_eq!(defo["mode"], "exact");
    assert!(defo["value"].as_f64().unwrap() > 0.5);
}

#[test]
fn stability_suite_holds_on_builtin_pair() {
    let out = wpdkit(&[
        "compare", "--example", "boutin-kemper", "--degree", "0", "--suite", "stability",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let checks = v["stability"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        let verdict = c["verdict"].as_str().unwrap();
        assert!(
            verdict == "holds" || verdict == "holds_vacuously",
            "check {} has verdict {verdict}",
            c["name"]
        );
    }
}

#[test]
fn thread_cap_env_var_does_not_change_results() {
    let base = wpdkit(&["compare", "--example", "ums", "--p", "2"]);
    let capped = Command::new(env!("CARGO_BIN_EXE_wpdkit"))
        .args(["compare", "--example", "ums", "--p", "2"])
        .env("WPDKIT_THREADS", "1")
        .output()
        .unwrap();
    assert!(base.status.success() && capped.status.success());
    assert_eq!(base.stdout, capped.stdout);
}
