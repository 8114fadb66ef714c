//! End-to-end checks of the binary: report shape, pinned values, exit
//! codes and byte-identical determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_instanton"))
        .args(args)
        .env("INSTANTON_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cohom_reports_the_pinned_first_cohomology() {
    let out = run(&["cohom", "--bundle", "-l - e"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["h1"], 1);
    assert_eq!(v["chi"], -1);
    assert_eq!(v["schema"], "instanton-report/1");
    assert!(v["convention"].as_str().unwrap().contains("(a, -b, c)"));
}

#[test]
fn charge_reports_degree_and_moduli_dimension() {
    let out = run(&["charge", "--alpha", "4", "--beta", "2", "--gamma", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["degree"], 14);
    assert_eq!(v["moduli_dim"], 1);
    assert_eq!(v["euler_check"]["pass"], true);
}

#[test]
fn charge_rejects_the_doubling_violation() {
    let out = run(&[
        "charge",
        "--alpha",
        "3",
        "--beta",
        "1",
        "--gamma",
        "3",
        "--delta",
        "0",
        "--epsilon",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert!(v["defect_error"]
        .as_str()
        .unwrap()
        .contains("2*delta >= epsilon"));
}

#[test]
fn monad_reports_the_shape_and_chern_data() {
    let out = run(&["monad", "--charge", "4,2,2", "--defect", "0,0"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["chern"]["rank"], 2);
    assert_eq!(v["chern"]["c1"], "-3l + e - 2xi");
    assert_eq!(v["chern"]["c2"], "4lxi - 2exi + 2l2");
    assert_eq!(v["chern"]["c3"], 0);
}

#[test]
fn sections_lists_the_monomial_basis() {
    let out = run(&["sections", "--bundle", "l", "--list"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["dimension"], 3);
    let monos: Vec<&str> = v["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_str().unwrap())
        .collect();
    assert!(monos.contains(&"z"));
    assert!(monos.contains(&"x1 y"));
}

#[test]
fn minimal_all_checks_pass_for_both_charges() {
    for charge in ["422", "313"] {
        let out = run(&["minimal", "--charge", charge, "--verify", "all"]);
        assert!(out.status.success(), "{charge}");
        let v = json_of(&out);
        assert_eq!(v["all_pass"], true, "{charge}");
        assert_eq!(v["checks"]["line"]["splitting"], serde_json::json!([0, -1]));
    }
}

#[test]
fn sweeps_run_clean() {
    let out = run(&["sweep", "serre", "--bound", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["cells"], 9 * 9 * 9);
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = run(&["charge", "--alpha", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["cohom", "--bundle", "3q + e"]);
    assert_eq!(out.status.code(), Some(2)); // malformed class expressions are usage errors
    let v = json_of(&out);
    assert!(v["error"].as_str().unwrap().contains("unknown symbol"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = run(&["charge", "--alpha", "3", "--beta", "1", "--gamma", "3"]);
    let b = run(&["charge", "--alpha", "3", "--beta", "1", "--gamma", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&[
        "minimal",
        "--charge",
        "313",
        "--verify",
        "stability",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "minimal",
        "--charge",
        "313",
        "--verify",
        "stability",
        "--seed",
        "7",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pretty_format_renders_lines() {
    let out = run(&["--format", "pretty", "cohom", "--bundle", "e"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h0: 1"));
}

#[test]
fn accept_runs_the_whole_checklist() {
    let out = run(&["accept"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}

#[test]
fn random_sections_use_the_chart_path() {
    let out = run(&[
        "minimal",
        "--charge",
        "422",
        "--verify",
        "surjective",
        "--random-sections",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(
        v["checks"]["surjective"]["certificate"]["method"],
        "ChartAnalysis"
    );
}
