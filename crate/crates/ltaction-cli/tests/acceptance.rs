//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Criterion 8 is expected to fail in two sub-checks (composition of general
//! pairs past mod p and θ-integrality for α1 ≠ 0); the decisions ledger
//! documents why the source formulas cannot satisfy them. All other criteria
//! must pass.

use std::time::Instant;

use ltaction_cli::verify::{self, Check};

struct Criterion {
    number: u8,
    title: &'static str,
    run: fn() -> Vec<Check>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "p=2 golden series (24 coefficients, exact mod 2^64)",
        run: verify::check_paper_p2,
    },
    Criterion {
        number: 2,
        title: "p=3 golden series (8 coefficients, exact mod 3^40)",
        run: verify::check_paper_p3,
    },
    Criterion {
        number: 3,
        title: "closed γ1..γ4 match all three methods (10 elements per q in {2,3,5})",
        run: verify::check_closed_low_degree,
    },
    Criterion {
        number: 4,
        title: "three-way oracle agreement mod (p^20, u1^40) (5 elements per q in {2,3,4,5})",
        run: verify::check_three_way,
    },
    Criterion {
        number: 5,
        title: "brute-force tree oracle and census pins (q=2 w≤7, q=3 w≤6)",
        run: verify::check_tree_oracle,
    },
    Criterion {
        number: 6,
        title: "series oracles: closed = m-sequence = matrix products; displayed w1 at q=2",
        run: verify::check_series_oracles,
    },
    Criterion {
        number: 7,
        title: "degree concentration and Witt specializations (p in {2,3,5}, 10 units)",
        run: verify::check_witt_specializations,
    },
    Criterion {
        number: 8,
        title: "action axioms: identity, composition, heads, integrality, monitor",
        run: verify::check_axioms,
    },
    Criterion {
        number: 9,
        title: "linearity classification (p in {2,3,5})",
        run: verify::check_linearity,
    },
];

fn main() {
    let mut failures = 0usize;
    for criterion in CRITERIA {
        let start = Instant::now();
        let checks = (criterion.run)();
        let pass = checks.iter().all(|c| c.pass);
        let elapsed = start.elapsed().as_secs_f64();
        println!(
            "[{}] criterion {}: {} ({elapsed:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            criterion.number,
            criterion.title,
        );
        for c in &checks {
            println!(
                "       [{}] {}: {}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        if !pass {
            failures += 1;
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
