//! The acceptance checklist as an integration test target: one test per
//! criterion, each printing a single pass/fail line. Every tolerance is
//! exact (zero); bounds are pinned inside the suite module.

use instanton_core::suite::{self, CriterionResult};

fn run(r: CriterionResult) {
    println!(
        "criterion {:02} {}: {} ({})",
        r.id,
        r.name,
        if r.pass { "PASS" } else { "FAIL" },
        r.details
    );
    assert!(
        r.pass,
        "criterion {} ({}) failed: {}",
        r.id, r.name, r.details
    );
}

#[test]
fn c01_oracle_equivalence() {
    run(suite::criterion_01_oracle_equivalence());
}

#[test]
fn c02_riemann_roch_serre() {
    run(suite::criterion_02_riemann_roch_serre());
}

#[test]
fn c03_pinned_scalars() {
    run(suite::criterion_03_scalars());
}

#[test]
fn c04_monad_chern() {
    run(suite::criterion_04_monad_chern());
}

#[test]
fn c05_table_euler() {
    run(suite::criterion_05_table_euler());
}

#[test]
fn c06_minimality() {
    run(suite::criterion_06_minimality());
}

#[test]
fn c07_exceptional_collection() {
    run(suite::criterion_07_exceptional());
}

#[test]
fn c08_minimal_instanton_422() {
    run(suite::criterion_08_minimal_422());
}

#[test]
fn c09_minimal_instanton_313() {
    run(suite::criterion_09_minimal_313());
}

#[test]
fn c10_negative_controls() {
    run(suite::criterion_10_negative_controls());
}
