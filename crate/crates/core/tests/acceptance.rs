//! End-to-end acceptance suite: one test per numbered criterion, each
//! printing its pass/fail line and the per-check details. Run with
//! `cargo test --test acceptance -- --nocapture` to see the full table.

use spinlim::acceptance::*;

const SEED: u64 = 0x5EED_2024;

fn run(result: spinlim::Result<CriterionResult>) {
    let result = result.expect("criterion must run to completion");
    println!("{}", result.summary_line());
    for line in &result.details {
        println!("    {line}");
    }
    assert!(result.pass, "{}", result.summary_line());
}

#[test]
fn criterion_01_axiom_suite() {
    run(criterion_1_axiom_suite(SEED));
}

#[test]
fn criterion_02_exact_identities() {
    run(criterion_2_exact_identities(SEED));
}

#[test]
fn criterion_03_brute_force_oracle() {
    run(criterion_3_brute_force_oracle());
}

#[test]
fn criterion_04_spectrum_convergence() {
    run(criterion_4_spectrum_convergence());
}

#[test]
fn criterion_05_quasi_eigenvectors() {
    run(criterion_5_quasi_eigenvectors());
}

#[test]
fn criterion_06_classical_limit() {
    run(criterion_6_classical_limit());
}

#[test]
fn criterion_07_ssb() {
    run(criterion_7_ssb());
}

#[test]
fn criterion_08_dgr() {
    run(criterion_8_dgr());
}

#[test]
fn criterion_09_forbidden_region() {
    run(criterion_9_forbidden_region());
}

#[test]
fn criterion_10_symbol_correction_fit() {
    run(criterion_10_symbol_fit());
}
