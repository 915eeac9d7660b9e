//! Acceptance gate: runs the built-in self-test suite against the bundled
//! quiver corpus and prints one pass/fail line per criterion.

use twocat::corpus::{A2, A3_ZERO};
use twocat::selftest;

#[test]
fn acceptance() {
    let report = selftest::run(A2, A3_ZERO).expect("corpus algebras parse");
    for c in &report.criteria {
        let status = if c.passed { "pass" } else { "fail" };
        println!("criterion {}: {status} - {} ({})", c.id, c.name, c.detail);
    }
    let failed: Vec<u32> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id)
        .collect();
    assert!(report.passed && failed.is_empty(), "failed criteria: {failed:?}");
}
