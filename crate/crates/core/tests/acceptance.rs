//! Acceptance gate: one test (and one printed pass/fail line) per criterion.

use diptych_core::sweep::run_criterion;

const SEED: u64 = 0xD19;

fn gate(id: usize) {
    let r = run_criterion(id, SEED);
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_diptych_certification() {
    gate(1);
}

#[test]
fn criterion_2_nerve_exactness() {
    gate(2);
}

#[test]
fn criterion_3_godement_realization() {
    gate(3);
}

#[test]
fn criterion_4_gauge_counts() {
    gate(4);
}

#[test]
fn criterion_5_conjugation_involution() {
    gate(5);
}

#[test]
fn criterion_6_canonical_butterfly() {
    gate(6);
}

#[test]
fn criterion_7_universal_activation() {
    gate(7);
}

#[test]
fn criterion_8_cocycle_counts() {
    gate(8);
}

#[test]
fn criterion_9_square_classifier_oracle() {
    gate(9);
}
