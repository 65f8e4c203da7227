//! One line per acceptance criterion, full tier.

use std::io::Write;

use hatlab::suite::{run_criterion, Tier, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    // Written to the raw handle so the table shows even when output is captured.
    let mut out = std::io::stdout();
    writeln!(out).unwrap();
    for &(id, name) in &CRITERIA {
        let r = run_criterion(id, Tier::Full);
        let status = if r.pass { "PASS" } else { "FAIL" };
        writeln!(out, "[{status}] {id:>2} {name} ({} ms): {}", r.elapsed_ms, r.detail).unwrap();
        if !r.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
