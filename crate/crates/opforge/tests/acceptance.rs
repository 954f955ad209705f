//! Acceptance run: one PASS/FAIL line per criterion, each backed by the
//! matching `opforge verify` suite at its default bounds.

use std::process::ExitCode;
use std::time::Instant;

use opforge::cli::suites::{run_suite, SuiteOptions};

const CRITERIA: &[(&str, &str)] = &[
    ("simplicial-identities", "cosimplicial and simplicial identities on enumerated paths"),
    ("d-squared", "both total differentials square to zero"),
    ("tree-path", "trees biject with complexity-two paths, compatibly with insertion"),
    ("surjections", "surjection bijection and filtration by complexity"),
    ("brac-nbrac", "brac and its normalized quotient have equal homology"),
    ("little-disks", "normalized brac homology matches the little disks"),
    ("hbrac-closure", "closure of the bounded brace suboperad"),
    ("whiskering", "whiskering is a chain map compatible with insertion"),
    ("gerstenhaber", "Gerstenhaber identities and the Hochschild action"),
    ("decomposition", "every amputated tree decomposes into atoms"),
];

fn main() -> ExitCode {
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for (n, (suite, what)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let line = match run_suite(suite, &opts) {
            Ok(report) => {
                let counts: Vec<String> = report.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let verdict = if report.passed { "PASS" } else { "FAIL" };
                if !report.passed {
                    failed += 1;
                }
                let mut line = format!(
                    "criterion {}: {verdict} {suite} ({}; {:.1}s) {what}",
                    n + 1,
                    counts.join(" "),
                    start.elapsed().as_secs_f64()
                );
                if let Some(f) = &report.failure {
                    line.push_str(&format!("\n  first failure: {f}"));
                }
                line
            }
            Err(e) => {
                failed += 1;
                format!("criterion {}: FAIL {suite} (error: {e}) {what}", n + 1)
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
