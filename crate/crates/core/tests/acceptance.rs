//! Acceptance suite: every verification criterion at its stated tolerance,
//! one pass/fail line per criterion.
//!
//! The merging-zeros part of criterion 9 is expected to fail: transversal
//! approach to the multiple-zero divisor is impossible inside the
//! hyperelliptic backend (see the criterion details and the project notes),
//! so that check reports its measured slope and stays red rather than being
//! loosened.

use spinlab_core::verify::{self, Level};

const SEED: u64 = 20260808;

fn run(r: spinlab_core::verify::CriterionResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_theta_correctness() {
    run(verify::criterion_1(SEED));
}

#[test]
fn criterion_02_period_matrices() {
    run(verify::criterion_2(SEED));
}

#[test]
fn criterion_03_spinor_structure() {
    run(verify::criterion_3(SEED));
}

#[test]
fn criterion_04_pairing_identity() {
    run(verify::criterion_4(SEED));
}

#[test]
fn criterion_05_tau_homogeneity_full() {
    run(verify::criterion_5(Level::Full, SEED));
}

#[test]
fn criterion_06_period_degeneration() {
    run(verify::criterion_6(SEED));
}

#[test]
fn criterion_07_theta_degeneration_exponents() {
    run(verify::criterion_7(SEED));
}

#[test]
fn criterion_08_spinor_degeneration_exponents() {
    run(verify::criterion_8(SEED));
}

#[test]
fn criterion_09_tau_boundary_exponents() {
    run(verify::criterion_9(SEED));
}

#[test]
fn criterion_10_exact_divisor_classes() {
    run(verify::criterion_10(SEED));
}
