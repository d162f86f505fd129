//! The acceptance suite: one test per criterion, each printing its
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; the CLI's `selftest --level full` prints the same.

use ordalg::selftest::{self, CriterionReport};

fn assert_criterion(report: CriterionReport) {
    println!("{}", report.line());
    assert!(report.pass, "{}", report.line());
}

#[test]
fn criterion_1_end_to_end_extraction() {
    assert_criterion(selftest::criterion_1());
}

#[test]
fn criterion_2_cover_lemma_fuzz() {
    assert_criterion(selftest::criterion_2());
}

#[test]
fn criterion_3_gap_lemma_fuzz() {
    assert_criterion(selftest::criterion_3());
}

#[test]
fn criterion_4_restriction_identities() {
    assert_criterion(selftest::criterion_4());
}

#[test]
fn criterion_5_kernel_calculus() {
    assert_criterion(selftest::criterion_5());
}

#[test]
fn criterion_6_psi_isometry() {
    assert_criterion(selftest::criterion_6());
}

#[test]
fn criterion_7_runge_witness() {
    assert_criterion(selftest::criterion_7());
}

#[test]
fn criterion_8_annihilating_measures() {
    assert_criterion(selftest::criterion_8());
}
