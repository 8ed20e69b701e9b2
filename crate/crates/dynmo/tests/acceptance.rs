//! End-to-end verification suite over randomized corpora with oracle
//! cross-checks. One line is printed per criterion; the test fails if any
//! criterion fails. The bench-output determinism criterion lives in
//! `tests/cli.rs`, next to the binary runner it exercises.

use dynmo::harness;

const SUITE_SEED: u64 = 0xD15C0;

#[test]
fn acceptance_suite() {
    let outcomes = harness::run_all(SUITE_SEED, 1.0);
    let mut all_pass = true;
    for (i, outcome) in outcomes.iter().enumerate() {
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} ({}): {status} - {}",
            i + 1,
            outcome.name,
            outcome.detail
        );
        all_pass &= outcome.pass;
    }
    assert!(all_pass, "one or more acceptance criteria failed");
}
