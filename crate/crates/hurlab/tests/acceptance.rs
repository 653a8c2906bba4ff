//! All nine acceptance criteria at full size, one status line each.
//!
//! Set `HURLAB_QUICK=1` for the trimmed ranges used by `hurlab verify --quick`.

use hurlab::verify::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let quick = std::env::var("HURLAB_QUICK").is_ok_and(|v| v == "1");
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let check = run_criterion(c, quick);
        println!("{check}");
        if !check.passed {
            failed.push(check.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
