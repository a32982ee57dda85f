use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, Value) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cycleforge"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&text).unwrap_or(Value::Null);
    (code, report)
}

#[test]
fn realize_auto_subdivided_tetrahedron_boundary() {
    let input = fixture("tetrahedron_boundary.json");
    let (code, r) = run(&["realize", "--input", &input, "--auto-subdivide"]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "realize");
    assert_eq!(r["status"], "pass");
    let p = &r["payload"];
    assert_eq!(p["cells"], 432);
    assert_eq!(p["k"], 18);
    assert_eq!(p["complete"], true);
    assert_eq!(p["subdivided"], true);
    assert!(p["checks"].as_object().unwrap().values().all(|v| v == true));
    assert!(r["timing_ms"].is_number());
    assert!(r["version"].is_string());
}

#[test]
fn realize_without_coloring_needs_subdivision() {
    let (code, r) = run(&["realize", "--input", &fixture("tetrahedron_boundary.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
}

#[test]
fn realize_budget_exhaustion_is_partial() {
    let input = fixture("tetrahedron_boundary.json");
    let (code, r) = run(&["realize", "--input", &input, "--auto-subdivide", "--budget", "100"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "partial");
    assert_eq!(r["payload"]["complete"], false);
    assert_eq!(r["payload"]["cells"], 100);
    assert_eq!(r["payload"]["k"], Value::Null);
}

#[test]
fn realize_hexagon_is_degree_one() {
    let (code, r) = run(&["realize", "--input", &fixture("hexagon.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["cells"], 6);
    assert_eq!(r["payload"]["k"], 1);
    assert_eq!(r["payload"]["subdivided"], false);
}

#[test]
fn realize_random_pairings_depend_only_on_seed() {
    let input = fixture("hexagon.json");
    let a = run(&["realize", "--input", &input, "--random-pairings", "--seed", "7"]);
    let b = run(&["realize", "--input", &input, "--random-pairings", "--seed", "7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1["payload"], b.1["payload"]);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let input = fixture("tetrahedron_boundary.json");
    let args = ["realize", "--input", &input, "--auto-subdivide"];
    let (_, one) = run_env(&args, &[("CYCLEFORGE_THREADS", "1")]);
    let (_, two) = run_env(&args, &[("CYCLEFORGE_THREADS", "2")]);
    assert_eq!(one["payload"], two["payload"]);
}

#[test]
fn malformed_input_exits_3() {
    let (code, r) = run(&["check", "--input", &fixture("malformed.json")]);
    assert_eq!(code, 3);
    assert_eq!(r["status"], "fail");
    let (code, _) = run(&["check", "--input", &fixture("does_not_exist.json")]);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(&["constants", "--n", "0"]).0, 3);
    assert_eq!(run(&["--tolerance", "0.5", "constants", "--n", "2"]).0, 3);
    assert_eq!(run(&["no-such-command"]).0, 3);
    assert_eq!(run(&["covers", "--input", &fixture("square.json")]).0, 3);
}

#[test]
fn flag_square_reports_empty_circuit() {
    let (code, r) = run(&["check", "--input", &fixture("square.json"), "--flag-square"]);
    assert_eq!(code, 0);
    let fs = &r["payload"]["flag_square"];
    assert_eq!(fs["has_empty_4_circuit"], true);
    assert_eq!(fs["is_flag"], true);
    assert_eq!(fs["empty_4_circuits"][0], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn check_characteristic_and_posets() {
    let (code, r) = run(&["check", "--input", &fixture("square.json"), "--lambda", &fixture("square_lambda.json")]);
    assert_eq!((code, &r["payload"]["characteristic_valid"]), (0, &Value::Bool(true)));
    assert_eq!(run(&["check", "--input", &fixture("chain_poset.json")]).0, 0);
    assert_eq!(run(&["check", "--input", &fixture("cyclic_poset.json")]).0, 1);
    let (code, r) = run(&["check", "--input", &fixture("wrap_6_3.json")]);
    assert_eq!((code, &r["payload"]["degree"]), (0, &Value::from(2)));
}

#[test]
fn constants_for_n3() {
    let (code, r) = run(&["constants", "--n", "3"]);
    assert_eq!(code, 0);
    let p = &r["payload"];
    assert_eq!(p["N"], "60");
    assert_eq!(p["cos_eps"], serde_json::json!(["4", "5"]));
    assert!((p["eps"].as_f64().unwrap() - (0.8f64).acos()).abs() < 1e-15);
    assert!((p["inradius"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn covers_of_the_square() {
    let (code, r) = run(&["covers", "--input", &fixture("square.json"), "--lambda", &fixture("square_lambda.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["euler"], 0);
    assert_eq!(r["payload"]["f_vector"], serde_json::json!([4, 8, 4]));
    assert_eq!(r["payload"]["orientable"], true);
    let (code, r) = run(&["covers", "--input", &fixture("square.json"), "--real-moment-angle"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["f_vector"], serde_json::json!([16, 32, 16]));
}

#[test]
fn certify_fine_pass_and_fail() {
    let (code, r) = run(&["certify-fine", "--input", &fixture("dodecagon_placement.json"), "--eps", "1.0"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["degree"], 1);
    let (code, r) = run(&["certify-fine", "--input", &fixture("hexagon_placement.json"), "--eps", "1.0"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["violations"].as_array().unwrap().len(), 6);
    // Adjacent vertices sit exactly π/2 apart, so the strict test fails in exact mode.
    let (code, r) =
        run(&["certify-fine", "--input", &fixture("square_exact_placement.json"), "--eps", "1.5707963267948966"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["exact"], true);
}

#[test]
fn dominate_from_maps() {
    let (code, r) = run(&["dominate", "--input", &fixture("wrap_6_3.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["degree"], 16);
    assert_eq!(r["payload"]["map_degree"], 2);
    let (code, r) = run(&["dominate", "--input", &fixture("identity_hexagon.json")]);
    assert_eq!((code, &r["payload"]["degree"]), (0, &Value::from(1)));
    let (code, r) = run(&["dominate", "--input", &fixture("fold_6_3.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
}

#[test]
fn dominate_from_placement() {
    let (code, r) = run(&["dominate", "--input", &fixture("dodecagon_placement.json"), "--n", "2"]);
    assert_eq!(code, 0);
    let d = &r["payload"]["domination"];
    assert_eq!((d["m1"].as_i64(), d["m2"].as_i64()), (Some(12), Some(6)));
    assert_eq!(d["degree"].as_i64().unwrap().abs(), 64);
    assert_eq!(run(&["dominate", "--input", &fixture("dodecagon_placement.json"), "--n", "3"]).0, 3);
}

#[test]
fn text_report() {
    let out = Command::new(env!("CARGO_BIN_EXE_cycleforge"))
        .args(["--text", "check", "--input", &fixture("wrap_6_3.json")])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check pass"));
    assert!(text.contains("degree: 2"));
}
