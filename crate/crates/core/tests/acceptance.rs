//! Acceptance run: one line per criterion, each backed by a verification suite.

use std::io::Write;
use std::time::{Duration, Instant};

use dirac_double::sampler::DEFAULT_SEED;
use dirac_double::verify::{run_suite, Check, Tolerances};

struct Criterion {
    id: usize,
    suite: &'static str,
    label: &'static str,
    budget: Option<Duration>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, suite: "iwasawa", label: "Iwasawa factorization", budget: Some(Duration::from_secs(1)) },
    Criterion { id: 2, suite: "pairing", label: "pairing table", budget: None },
    Criterion { id: 3, suite: "dirac", label: "Dirac bracket closed forms", budget: Some(Duration::from_secs(5)) },
    Criterion { id: 4, suite: "example", label: "SL(2,C) explicit formulas", budget: None },
    Criterion { id: 5, suite: "axioms", label: "bracket axioms", budget: None },
    Criterion { id: 6, suite: "momentum", label: "momentum algebra", budget: None },
    Criterion { id: 7, suite: "involutivity", label: "involutivity", budget: None },
    Criterion { id: 8, suite: "flow", label: "factorization vs RK4", budget: Some(Duration::from_secs(10)) },
    Criterion { id: 9, suite: "orbit", label: "orbit space", budget: None },
    Criterion { id: 10, suite: "lagrangian", label: "Lagrangian", budget: None },
];

fn describe(c: &Check) -> String {
    format!("{}={:.3e}/{:.1e}{}", c.check, c.residual, c.tolerance, if c.pass { "" } else { "!" })
}

#[test]
fn acceptance() {
    let tol = Tolerances::default();
    let mut failed = Vec::new();
    // start on a fresh line after the harness's "test acceptance ..." prefix
    writeln!(std::io::stderr().lock()).expect("stderr is writable");
    for crit in &CRITERIA {
        let start = Instant::now();
        let checks = run_suite(crit.suite, DEFAULT_SEED, &tol).expect("known suite");
        let elapsed = start.elapsed();
        let in_budget = crit.budget.is_none_or(|b| elapsed <= b);
        let pass = in_budget && checks.iter().all(|c| c.pass);
        let budget = crit.budget.map(|b| format!(" budget {:.0?}", b)).unwrap_or_default();
        let details: Vec<String> = checks.iter().map(describe).collect();
        // written to stderr directly so the report survives output capture
        writeln!(
            std::io::stderr().lock(),
            "criterion {:>2} {:<28} {} [{:.2?}{}] {}",
            crit.id,
            crit.label,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            details.join(" ")
        )
        .expect("stderr is writable");
        if !pass {
            failed.push(crit.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
