//! Acceptance suite: runs every validation criterion at its pinned
//! tolerance and prints one pass/fail line per criterion.
//!
//! Run with `cargo test -p sqradar --test acceptance -- --nocapture` to see
//! the lines on success as well.

use sqradar::validate::{run, Profile};

#[test]
fn acceptance_criteria() {
    let profile = Profile::default_profile();
    let summary = run(&profile);

    println!("acceptance suite (profile: {})", summary.profile);
    for c in &summary.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let rel = c
            .worst_rel_error
            .map(|v| format!(" rel_err={v:.2e}"))
            .unwrap_or_default();
        let leak = c
            .worst_leakage
            .map(|v| format!(" leakage={v:.2e}"))
            .unwrap_or_default();
        println!("{status} {}{rel}{leak} — {}", c.name, c.detail);
    }
    println!("total {:.1}s", summary.elapsed_seconds);

    assert!(
        summary.passed(),
        "acceptance criteria failed:\n{}",
        summary
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("  {} — {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("\n")
    );
    assert!(
        summary.elapsed_seconds < 300.0,
        "validation run took {:.1}s, budget is 300s",
        summary.elapsed_seconds
    );
}

#[test]
fn acceptance_criteria_strict_profile() {
    let summary = run(&Profile::strict());
    assert!(
        summary.passed(),
        "strict profile failed:\n{}",
        summary
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("  {} — {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("\n")
    );
}
