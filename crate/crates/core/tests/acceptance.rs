//! One PASS/FAIL line per acceptance criterion.
//!
//! Rows listed in `KNOWN_UNATTAINABLE` fail for reasons recorded in the
//! decisions ledger. They are still printed as failures, but do not fail
//! the run. Anything else that fails on a gating criterion does.

use std::process::ExitCode;
use std::time::Instant;

use blochgeo::goldens::{criterion, GoldenConfig, CRITERIA};

const KNOWN_UNATTAINABLE: [&str; 1] = [
    // The conformal Husimi volume element diverges at the pure states, so
    // this relative entropy is undefined.
    "KL(gks || conformal-hus)",
];

fn main() -> ExitCode {
    let cfg = GoldenConfig::default();
    let mut unexpected = 0;
    for n in 1..=CRITERIA {
        let start = Instant::now();
        let rows = criterion(n, &cfg);
        let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        let gating = rows.iter().all(|r| r.gating);
        println!(
            "criterion {n:>2}: {} ({}/{} rows{}, {:.1}s)",
            if failed.is_empty() { "PASS" } else { "FAIL" },
            rows.len() - failed.len(),
            rows.len(),
            if gating { "" } else { ", non-gating" },
            start.elapsed().as_secs_f64()
        );
        for r in failed {
            let known = KNOWN_UNATTAINABLE.contains(&r.label.as_str());
            println!(
                "    failing row: {} = {} (target {}){}{}",
                r.label,
                r.value,
                r.target,
                if r.note.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", r.note)
                },
                if known { " [known unattainable]" } else { "" }
            );
            if r.gating && !known {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected gating failure(s)");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
