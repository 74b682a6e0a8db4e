//! Runs every acceptance suite with seed 0 and prints one line per suite.
//!
//! Suites 2 and 6 are expected to fail: with the regular action `kΣ_*` is
//! not χ-commutative, and its zero ideal is prime for the graded product.

use std::io::Write;

use symqcs::suites::{run, SuiteResult, CRITERIA};

const EXPECTED_FAIL: [usize; 2] = [2, 6];

fn run_all() -> Vec<SuiteResult> {
    (1..=CRITERIA).map(|c| run(c, 0).unwrap_or_else(|e| panic!("suite {c} errored: {e}"))).collect()
}

#[test]
fn acceptance() {
    let results = run_all();
    // Written to the stderr handle directly so the lines survive output capture.
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for r in &results {
        writeln!(err, "{}", r.summary()).unwrap();
        for d in &r.diagnostics {
            writeln!(err, "    note: {d}").unwrap();
        }
    }
    drop(err);
    for r in &results {
        assert!(r.elapsed_ms <= r.budget_ms, "{}", r.summary());
        if EXPECTED_FAIL.contains(&r.criterion) {
            assert!(!r.passed, "criterion {} was expected to fail", r.criterion);
        } else {
            assert!(r.passed, "{}", r.summary());
        }
    }
}
