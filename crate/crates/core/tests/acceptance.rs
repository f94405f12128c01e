//! One line per acceptance criterion, with its runtime against the budget.

use std::time::Instant;

use biset_eval::selftest::{self, Config, CriterionReport};

/// Runtime budgets in seconds, by criterion.
const BUDGETS: [f64; 8] = [120.0, 60.0, 600.0, 600.0, 600.0, 600.0, 120.0, 600.0];

fn report(r: &CriterionReport) -> bool {
    let budget = BUDGETS[r.id as usize - 1];
    let in_time = r.seconds < budget;
    let ok = r.passed && in_time;
    println!(
        "criterion {}: {} | {} | {} checks | {:.2}s (budget {budget:.0}s)",
        r.id,
        if ok { "PASS" } else { "FAIL" },
        r.title,
        r.checks,
        r.seconds
    );
    for f in r.failures.iter().take(10) {
        println!("    {f}");
    }
    ok
}

fn s7_stretch() -> bool {
    let start = Instant::now();
    match selftest::s7_stretch(&Config::default()) {
        Ok(dim) => {
            let ok = dim == 0;
            println!(
                "stretch: {} | S7 over A5 with sign has dimension {dim} | {:.2}s",
                if ok { "PASS" } else { "FAIL" },
                start.elapsed().as_secs_f64()
            );
            ok
        }
        Err(e) => {
            println!("stretch: FAIL | {e}");
            false
        }
    }
}

/// Runs the eight criteria; `--ignored` adds the slow `S7` stretch check.
fn main() {
    let cfg = Config::default();
    let start = Instant::now();
    let results = selftest::run_all(&cfg);
    let passed = results.iter().map(report).filter(|&ok| ok).count();
    println!(
        "{passed}/{} criteria passed in {:.2}s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    let mut ok = passed == results.len();
    if std::env::args().any(|a| a == "--ignored" || a == "--include-ignored") {
        ok &= s7_stretch();
    } else {
        println!("stretch: skipped (pass --ignored to run S7 over A5)");
    }
    if !ok {
        std::process::exit(1);
    }
}
