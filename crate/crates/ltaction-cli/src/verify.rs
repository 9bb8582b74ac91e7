//! The named verification suites replaying the golden tables and the
//! property-based cross-checks. Each acceptance criterion has a dedicated
//! check function; suites bundle them.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ltaction::series::{f1_series, f_series, m_sequence, stabilized_f_f1, w1_series};
use ltaction::trees::{index, TreeEnumerator};
use ltaction::witt::balanced_residue;
use ltaction::{
    stabilizer, ActionEngine, Error, GroupElem, Linearity, Method, ScaledSeries, ScaledWitt,
    WittElem, WittParams,
};

/// Fixed seed: the randomized suites are deterministic run to run.
const SEED: u64 = 0x1f2e_3d4c_5b6a_0797;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {}: {}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {}\n",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn render_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct CheckJson<'a> {
            name: &'a str,
            pass: bool,
            detail: &'a str,
        }
        #[derive(serde::Serialize)]
        struct Doc<'a> {
            suite: &'a str,
            pass: bool,
            checks: Vec<CheckJson<'a>>,
        }
        let doc = Doc {
            suite: &self.suite,
            pass: self.passed(),
            checks: self
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: &c.name,
                    pass: c.pass,
                    detail: &c.detail,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    PaperP2,
    PaperP3,
    CrossOracle,
    WittLowDegree,
    TreesCensus,
    Axioms,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "paper-p2" => Some(Suite::PaperP2),
            "paper-p3" => Some(Suite::PaperP3),
            "cross-oracle" => Some(Suite::CrossOracle),
            "witt-low-degree" => Some(Suite::WittLowDegree),
            "trees-census" => Some(Suite::TreesCensus),
            "axioms" => Some(Suite::Axioms),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::PaperP2 => "paper-p2",
            Suite::PaperP3 => "paper-p3",
            Suite::CrossOracle => "cross-oracle",
            Suite::WittLowDegree => "witt-low-degree",
            Suite::TreesCensus => "trees-census",
            Suite::Axioms => "axioms",
        }
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::PaperP2 => check_paper_p2(),
        Suite::PaperP3 => check_paper_p3(),
        Suite::CrossOracle => {
            let mut checks = check_closed_low_degree();
            checks.extend(check_three_way());
            checks.extend(check_series_oracles());
            checks
        }
        Suite::WittLowDegree => check_witt_specializations(),
        Suite::TreesCensus => check_tree_oracle(),
        Suite::Axioms => {
            let mut checks = check_axioms();
            checks.extend(check_linearity());
            checks
        }
    };
    SuiteReport {
        suite: suite.name().into(),
        checks,
    }
}

fn random_elem(params: &Arc<WittParams>, rng: &mut StdRng) -> WittElem {
    let coords = (0..params.deg())
        .map(|_| BigUint::from(rng.random::<u64>()) % params.p_pow())
        .collect();
    WittElem::from_coords(params, coords)
}

fn random_unit(params: &Arc<WittParams>, rng: &mut StdRng) -> WittElem {
    loop {
        let e = random_elem(params, rng);
        if e.is_unit() {
            return e;
        }
    }
}

// -- criterion 1 ------------------------------------------------------------

pub fn check_paper_p2() -> Vec<Check> {
    let golden = crate::golden::p2();
    let run = || -> Result<Vec<Check>, Error> {
        let engine = ActionEngine::new(golden.p, golden.f, golden.m_exp, golden.modulus_u1_exp)?;
        let params = engine.params();
        let g = GroupElem::new(
            ltaction::witt::parse_elem(&golden.alpha0, params)?,
            ltaction::witt::parse_elem(&golden.alpha1, params)?,
        )?;
        let result = engine.act_u1(&g, Method::Trees)?;
        let mut matched = 0usize;
        let mut first_bad = None;
        for c in &golden.coefficients {
            let got = balanced_residue(&result.coeff(c.n), golden.m_exp);
            let expect: BigInt = c.value.parse().expect("golden integer");
            if got.as_ref() == Some(&expect) {
                matched += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("degree {}: got {:?}, want {}", c.n, got, expect));
            }
        }
        let listed: std::collections::HashSet<usize> =
            golden.coefficients.iter().map(|c| c.n).collect();
        let mut zeros_ok = true;
        for n in 0..golden.modulus_u1_exp {
            if !listed.contains(&n) && !result.coeff(n).is_zero_mod(golden.m_exp) {
                zeros_ok = false;
            }
        }
        Ok(vec![
            Check::new(
                "p=2 golden coefficients",
                matched == golden.coefficients.len(),
                first_bad.unwrap_or(format!(
                    "{matched}/{} coefficients matched as balanced integers mod 2^{}",
                    golden.coefficients.len(),
                    golden.m_exp
                )),
            ),
            Check::new(
                "p=2 golden zero pattern",
                zeros_ok,
                "all unlisted coefficients vanish below u1^73",
            ),
        ])
    };
    run().unwrap_or_else(|e| vec![Check::new("p=2 golden series", false, e.to_string())])
}

// -- criterion 2 ------------------------------------------------------------

pub fn check_paper_p3() -> Vec<Check> {
    let golden = crate::golden::p3();
    let run = || -> Result<Vec<Check>, Error> {
        let engine = ActionEngine::new(golden.p, golden.f, golden.m_exp, golden.modulus_u1_exp)?;
        let params = engine.params();
        let alpha = ltaction::witt::parse_elem(&golden.alpha, params)?;
        let g = GroupElem::from_witt_unit(alpha)?;
        let result = engine.act_u1(&g, Method::Recursive)?;
        let mut matched = 0usize;
        let mut first_bad = None;
        for c in &golden.coefficients {
            let expect = c.to_witt(params)?;
            if result.coeff(c.n).eq_mod(&expect, golden.m_exp) {
                matched += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("degree {} mismatch", c.n));
            }
        }
        let listed: std::collections::HashSet<usize> =
            golden.coefficients.iter().map(|c| c.n).collect();
        let zeros_ok = (0..golden.modulus_u1_exp)
            .all(|n| listed.contains(&n) || result.coeff(n).is_zero_mod(golden.m_exp));
        Ok(vec![
            Check::new(
                "p=3 golden coefficients",
                matched == golden.coefficients.len(),
                first_bad.unwrap_or(format!(
                    "{matched}/{} exact rationals in Z[√−1,1/5] matched mod 3^{}",
                    golden.coefficients.len(),
                    golden.m_exp
                )),
            ),
            Check::new(
                "p=3 golden zero pattern",
                zeros_ok,
                "all unlisted coefficients vanish below u1^33",
            ),
        ])
    };
    run().unwrap_or_else(|e| vec![Check::new("p=3 golden series", false, e.to_string())])
}

// -- criterion 3 ------------------------------------------------------------

pub fn check_closed_low_degree() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    for p in [2u64, 3, 5] {
        let mut run = || -> Result<bool, Error> {
            let engine = ActionEngine::new(p, 1, 20, 6)?;
            let params = engine.params();
            for _ in 0..10 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let closed = stabilizer::closed_gamma_low(&g, params.q())?;
                for method in [Method::Recursive, Method::Trees, Method::Functional] {
                    let r = engine.act_u1(&g, method)?;
                    for (k, expect) in closed.iter().enumerate() {
                        if !expect.eq_mod(&ScaledWitt::from_witt(r.coeff(k + 1)), 20) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        };
        let (pass, detail) = match run() {
            Ok(true) => (
                true,
                "γ1..γ4 closed forms match all three methods, 10 elements".into(),
            ),
            Ok(false) => (false, "closed-form mismatch".into()),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(format!("closed γ1..γ4 at q={p}"), pass, detail));
    }
    checks
}

// -- criterion 4 ------------------------------------------------------------

pub fn check_three_way() -> Vec<Check> {
    let cases = [(2u64, 1u32), (3, 1), (2, 2), (5, 1)];
    let mut checks = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .enumerate()
            .map(|(k, &(p, f))| {
                scope.spawn(move || {
                    let mut rng = StdRng::seed_from_u64(SEED ^ (k as u64 + 1));
                    let mut run = || -> Result<bool, Error> {
                        let engine = ActionEngine::new(p, f, 20, 40)?;
                        let params = engine.params();
                        for _ in 0..5 {
                            let g = GroupElem::new(
                                random_unit(params, &mut rng),
                                random_elem(params, &mut rng),
                            )?;
                            let a = engine.act_u1(&g, Method::Recursive)?;
                            let b = engine.act_u1(&g, Method::Trees)?;
                            let c = engine.act_u1(&g, Method::Functional)?;
                            if !a.eq_mod(&b, 20) || !a.eq_mod(&c, 20) {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    };
                    let q = p.pow(f);
                    match run() {
                        Ok(true) => Check::new(
                            format!("three-way agreement at q={q}"),
                            true,
                            "recursive = trees = functional mod (p^20, u1^40), 5 elements",
                        ),
                        Ok(false) => {
                            Check::new(format!("three-way agreement at q={q}"), false, "mismatch")
                        }
                        Err(e) => Check::new(
                            format!("three-way agreement at q={q}"),
                            false,
                            e.to_string(),
                        ),
                    }
                })
            })
            .collect();
        for h in handles {
            checks.push(h.join().expect("worker thread"));
        }
    });
    checks
}

// -- criterion 5 ------------------------------------------------------------

pub fn check_tree_oracle() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 0x7ee5);
    let mut checks = Vec::new();

    // census pins: weights 1-3 from the drawn tables, weight 4 recorded at
    // first run (1 universal + 9 others at q=2; 1 universal + 2 at q=3)
    let pinned: [(u64, &[(u64, usize)]); 3] = [
        (2, &[(1, 1), (2, 1), (3, 3), (4, 10)]),
        (3, &[(1, 1), (2, 1), (3, 1), (4, 3)]),
        (5, &[(1, 1), (2, 1), (3, 1), (4, 1)]),
    ];
    for (q, expected) in pinned {
        let run = || -> Result<bool, Error> {
            let mut en = TreeEnumerator::with_ceiling(q, crate::tree_ceiling());
            for &(w, count) in expected {
                if en.enumerate(w, false)?.len() != count {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let (pass, detail) = match run() {
            Ok(true) => (true, format!("census {expected:?}")),
            Ok(false) => (false, "census count mismatch".into()),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(format!("tree census at q={q}"), pass, detail));
    }

    // weight-4 summed index equals the closed γ4, and full enumeration
    // matches the generating function through the stated weights
    for (q, max_w) in [(2u64, 7u64), (3, 6)] {
        let mut run = || -> Result<bool, Error> {
            let engine = ActionEngine::new(q, 1, 16, max_w as usize + 1)?;
            let params = engine.params();
            let mut en = TreeEnumerator::with_ceiling(q, crate::tree_ceiling());
            for _ in 0..5 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let gamma = engine.act_u1(&g, Method::Recursive)?;
                for w in 1..=max_w {
                    let mut sum = ScaledWitt::zero(params);
                    for t in en.enumerate(w, false)?.iter() {
                        sum = sum.add(&index(t, g.alpha0(), g.alpha1())?);
                    }
                    if !sum.eq_mod(&ScaledWitt::from_witt(gamma.coeff(w as usize)), 16) {
                        return Ok(false);
                    }
                    if w == 4 {
                        let closed = stabilizer::closed_gamma_low(&g, q)?;
                        if !sum.eq_mod(&closed[3], 16) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        };
        let (pass, detail) = match run() {
            Ok(true) => (
                true,
                format!(
                    "Σ indices = Γ_n for weights ≤ {max_w}, 5 elements; weight-4 sum = closed γ4"
                ),
            ),
            Ok(false) => (false, "tree sum mismatch".into()),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(
            format!("brute-force oracle at q={q}"),
            pass,
            detail,
        ));
    }
    checks
}

// -- criterion 6 ------------------------------------------------------------

pub fn check_series_oracles() -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [2u64, 3, 5] {
        let run = || -> Result<bool, Error> {
            let q = p;
            let wmax = 200usize.min((q * q * q * q * q) as usize);
            let budget = wmax as u32;
            let params = WittParams::new(p, 1, 20 + budget)?;
            let fc = f_series(&params, wmax, budget)?;
            let f1c = f1_series(&params, wmax, budget)?;
            let (fm, f1m) = stabilized_f_f1(&params, wmax, budget)?;
            if !fc.eq_mod(&fm, 20) || !f1c.eq_mod(&f1m, 20) {
                return Ok(false);
            }
            let count = 2 * ((wmax as f64).log(q as f64).ceil() as usize + 3);
            let seq = m_sequence(&params, count, wmax, budget)?;
            let stable = |a: &ScaledSeries, b: &ScaledSeries| a.eq_mod(b, 20);
            if !stable(&seq.normalized[count - 2], &seq.normalized[count - 4])
                || !stable(&seq.normalized[count - 1], &seq.normalized[count - 3])
            {
                return Ok(false);
            }
            Ok(fc.eq_mod(&seq.normalized[count - 2], 20)
                && f1c.eq_mod(&seq.normalized[count - 1], 20))
        };
        let (pass, detail) = match run() {
            Ok(true) => (
                true,
                "closed formula = stabilized m-sequence = stabilized matrix products".into(),
            ),
            Ok(false) => (false, "series oracle mismatch".into()),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(format!("series oracles at q={p}"), pass, detail));
    }
    checks.push(w1_display_check());
    checks
}

fn w1_display_check() -> Check {
    let run = || -> Result<bool, Error> {
        let params = WittParams::new(2, 1, 60)?;
        let wmax = 32usize;
        let budget = wmax as u32;
        let term = |deg: usize, e: u32| {
            ScaledSeries::monomial(
                &params,
                wmax,
                budget,
                deg,
                ScaledWitt::new(WittElem::one(&params), e),
            )
        };
        // q = 2 exponents of the displayed truncation mod u^{q^5}
        let numerator = [
            (31usize, 2u32),
            (7, 1),
            (19, 1),
            (25, 1),
            (28, 1),
            (1, 0),
            (4, 0),
            (16, 0),
        ]
        .into_iter()
        .try_fold(ScaledSeries::zero(&params, wmax, budget), |acc, (d, e)| {
            acc.add(&term(d, e))
        })?;
        let denominator = [(15usize, 2u32), (3, 1), (9, 1), (12, 1), (0, 0)]
            .into_iter()
            .try_fold(ScaledSeries::zero(&params, wmax, budget), |acc, (d, e)| {
                acc.add(&term(d, e))
            })?;
        let f1 = f1_series(&params, wmax, budget)?;
        let f = f_series(&params, wmax, budget)?;
        let w1 = w1_series(&params, wmax, budget)?;
        let quotient = numerator.mul(&denominator.invert_unit()?)?;
        Ok(numerator.eq_mod(&f1, 24) && denominator.eq_mod(&f, 24) && w1.eq_mod(&quotient, 24))
    };
    match run() {
        Ok(true) => Check::new(
            "displayed w1 expansion at q=2",
            true,
            "numerator/denominator reproduce f1, f term by term mod u1^32",
        ),
        Ok(false) => Check::new("displayed w1 expansion at q=2", false, "mismatch"),
        Err(e) => Check::new("displayed w1 expansion at q=2", false, e.to_string()),
    }
}

// -- criterion 7 ------------------------------------------------------------

pub fn check_witt_specializations() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 0x3177);
    let mut checks = Vec::new();
    for p in [2u64, 3, 5] {
        let mut run = || -> Result<(bool, String), Error> {
            let engine = ActionEngine::new(p, 1, 20, 40)?;
            let params = engine.params();
            for _ in 0..10 {
                let alpha = random_unit(params, &mut rng);
                let g = GroupElem::from_witt_unit(alpha.clone())?;

                // (i) degree concentration of the general computation
                let full = engine.act_u1(&g, Method::Recursive)?;
                for n in 1..40usize {
                    if n as u64 % (p + 1) != 1 && !full.coeff(n).is_zero_mod(20) {
                        return Ok((false, format!("concentration fails at degree {n}")));
                    }
                }
                let alt = engine.witt_act_u1(&alpha)?;
                if !alt.eq_mod(&full, 20) {
                    return Ok((false, "alternating specialization disagrees".into()));
                }

                // (ii) closed low-degree coefficients, inside their validity
                // range d < p^2
                let table = engine.low_degree_closed(&alpha)?;
                for (deg, value) in &table {
                    if (*deg as u64) < p * p
                        && *deg < 40
                        && !value.eq_mod(&ScaledWitt::from_witt(alt.coeff(*deg)), 20)
                    {
                        return Ok((false, format!("closed coefficient at degree {deg}")));
                    }
                }

                // (iii) the weak-composition recursion through u1^{p^2}
                let rec = engine.witt_act_u1_recursion(&alpha)?;
                if !rec.series.eq_mod(&alt.series.truncate(rec.wmax), 20) {
                    return Ok((false, "δ-recursion disagrees".into()));
                }

                // (iv) τ against the closed corollary through u1^{2p+2},
                // inside validity min(3p+3, p^2)
                let tau = engine.witt_act_u(&alpha)?;
                let beta = alpha.frobenius().mul(&alpha.inv()?);
                let one = WittElem::one(params);
                let validity = (3 * p + 3).min(p * p);
                let t0 = ScaledWitt::from_witt(alpha.clone());
                let t1 = ScaledWitt::new(alpha.mul(&one.sub(&beta.pow(p + 1))), 1);
                let t2 = ScaledWitt::new(
                    alpha
                        .mul_u64(p)
                        .mul(&beta.pow(p + 1))
                        .mul(&one.sub(&beta.pow(p + 1))),
                    2,
                );
                for (deg, expect) in [(0u64, t0), (p + 1, t1), (2 * p + 2, t2)] {
                    if deg < validity
                        && !expect.eq_mod(&ScaledWitt::from_witt(tau.coeff(deg as usize)), 20)
                    {
                        return Ok((false, format!("τ coefficient at degree {deg}")));
                    }
                }
            }
            Ok((
                true,
                "concentration, closed forms, δ-recursion, τ corollary (validity-gated)".into(),
            ))
        };
        let (pass, detail) = match run() {
            Ok((pass, detail)) => (pass, detail),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(
            format!("Witt specializations at p={p}"),
            pass,
            detail,
        ));
    }
    checks
}

// -- criterion 8 ------------------------------------------------------------

pub fn check_axioms() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 0xa10a);
    let mut checks = Vec::new();
    for p in [2u64, 3] {
        let engine = match ActionEngine::new(p, 1, 16, 20) {
            Ok(e) => e,
            Err(e) => {
                checks.push(Check::new(format!("axioms at q={p}"), false, e.to_string()));
                continue;
            }
        };
        let params = engine.params();

        // identity acts trivially
        let identity_ok = (|| -> Result<bool, Error> {
            let e = GroupElem::identity(params);
            let r = engine.act_u1(&e, Method::Recursive)?;
            let u1 = ScaledSeries::u1(params, 20, 20);
            Ok(r.series.eq_mod(&u1, 16))
        })();
        checks.push(Check::new(
            format!("identity acts trivially at q={p}"),
            matches!(identity_ok, Ok(true)),
            "identity element fixes u1",
        ));

        // composition: Witt pairs compose exactly under Γ_{g·h} = Γ_h ∘ Γ_g
        let witt_comp = (|| -> Result<bool, Error> {
            for _ in 0..20 {
                let g = GroupElem::from_witt_unit(random_unit(params, &mut rng))?;
                let h = GroupElem::from_witt_unit(random_unit(params, &mut rng))?;
                let composite = engine.act_u1(&g.mul(&h), Method::Recursive)?;
                let gg = engine.act_u1(&g, Method::Recursive)?;
                let hh = engine.act_u1(&h, Method::Recursive)?;
                let chained = ScaledSeries::compose(&hh.series, &gg.series)?;
                if !composite.series.eq_mod(&chained, 16) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        checks.push(Check::new(
            format!("composition on the Witt subgroup at q={p} (diagnostic)"),
            matches!(witt_comp, Ok(true)),
            "Γ_(g·h) = Γ_h∘Γ_g exactly, 20 pairs",
        ));

        // composition for general pairs under the matrix-forced convention;
        // fails beyond mod p for α_1 ≠ 0 (see the decisions ledger): the
        // implemented recursion's γ_1 = σ(α_0)/α_0 is not multiplicative for
        // the presentation product.
        let general_comp = (|| -> Result<(usize, usize, usize), Error> {
            let mut pass16 = 0usize;
            let mut pass1 = 0usize;
            for _ in 0..20 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let h =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let composite = engine.act_u1(&g.mul(&h), Method::Recursive)?;
                let gg = engine.act_u1(&g, Method::Recursive)?;
                let hh = engine.act_u1(&h, Method::Recursive)?;
                let chained = ScaledSeries::compose(&hh.series, &gg.series)?;
                if composite.series.eq_mod(&chained, 16) {
                    pass16 += 1;
                }
                if composite.series.eq_mod(&chained, 1) {
                    pass1 += 1;
                }
            }
            Ok((pass16, pass1, 20))
        })();
        match general_comp {
            Ok((pass16, pass1, total)) => checks.push(Check::new(
                format!("composition for general pairs at q={p}"),
                pass16 == total,
                format!(
                    "{pass16}/{total} pairs compose mod (p^16, u1^20); {pass1}/{total} mod p \
                     (source formulas compose only mod p for α1 ≠ 0)"
                ),
            )),
            Err(e) => checks.push(Check::new(
                format!("composition for general pairs at q={p}"),
                false,
                e.to_string(),
            )),
        }

        // γ_0 = 0 and θ_0 = α_0; θ probed at a truncation where the
        // u-coefficients are still integral for α_1 ≠ 0
        let heads = (|| -> Result<bool, Error> {
            let theta_engine = ActionEngine::new(p, 1, 16, 4)?;
            for _ in 0..5 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let gamma = engine.act_u1(&g, Method::Recursive)?;
                if !gamma.coeff(0).is_zero_mod(16) {
                    return Ok(false);
                }
                let g_small = GroupElem::new(
                    theta_engine.parse(&ltaction::witt::format_elem(g.alpha0()))?,
                    theta_engine.parse(&ltaction::witt::format_elem(g.alpha1()))?,
                );
                let g_small = g_small?;
                let theta = theta_engine.act_u(&g_small, Method::Recursive)?;
                if !theta.coeff(0).eq_mod(g_small.alpha0(), 16) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        checks.push(Check::new(
            format!("γ0 = 0 and θ0 = α0 at q={p}"),
            matches!(heads, Ok(true)),
            "action preserves the maximal ideal and the grading",
        ));

        // integrality with the precision monitor: γ (any α), τ (Witt), and
        // θ over its Witt domain stay integral with no budget overflow;
        // θ for α_1 ≠ 0 is reported separately since the source formulas
        // genuinely produce denominators there.
        let integral = (|| -> Result<(bool, u32), Error> {
            let mut worst = 0u32;
            for _ in 0..5 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_elem(params, &mut rng))?;
                let r = engine.act_u1(&g, Method::Recursive)?; // errors on violation
                worst = worst.max(r.max_denom_seen);
                let alpha = random_unit(params, &mut rng);
                let tau = engine.witt_act_u(&alpha)?;
                worst = worst.max(tau.max_denom_seen);
                let theta = engine.act_u(&GroupElem::from_witt_unit(alpha)?, Method::Recursive)?;
                worst = worst.max(theta.max_denom_seen);
            }
            Ok((worst <= 20, worst))
        })();
        match integral {
            Ok((ok, worst)) => checks.push(Check::new(
                format!("integrality and precision monitor at q={p}"),
                ok,
                format!("every γ_n, τ_n, Witt θ_n integral; worst denominator exponent {worst} ≤ budget 20"),
            )),
            Err(e) => checks.push(Check::new(
                format!("integrality and precision monitor at q={p}"),
                false,
                e.to_string(),
            )),
        }

        let theta_general = (|| -> Result<Option<usize>, Error> {
            let z = WittElem::gen(params);
            let g = GroupElem::new(WittElem::one(params).add(&z.mul_u64(p)), z.clone())?;
            match engine.act_u(&g, Method::Recursive) {
                Ok(_) => Ok(None),
                Err(Error::IntegralityViolation { degree }) => Ok(Some(degree)),
                Err(e) => Err(e),
            }
        })();
        match theta_general {
            Ok(None) => checks.push(Check::new(
                format!("θ integrality for α1 ≠ 0 at q={p}"),
                true,
                "θ_n integral through u1^20",
            )),
            Ok(Some(degree)) => checks.push(Check::new(
                format!("θ integrality for α1 ≠ 0 at q={p}"),
                false,
                format!(
                    "first non-integral θ at degree {degree}: the u-action closed formula \
                     loses integrality for α1 ≠ 0 (see ledger)"
                ),
            )),
            Err(e) => checks.push(Check::new(
                format!("θ integrality for α1 ≠ 0 at q={p}"),
                false,
                e.to_string(),
            )),
        }
    }
    checks
}

// -- criterion 9 ------------------------------------------------------------

pub fn check_linearity() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 0x11ea);
    let mut checks = Vec::new();
    for p in [2u64, 3, 5] {
        let mut run = || -> Result<(bool, String), Error> {
            let engine = ActionEngine::new(p, 1, 16, (p + 4) as usize)?;
            let params = engine.params();
            let z = WittElem::gen(params);
            let q2 = params.q() * params.q();

            // Teichmüller powers and the prime subring act linearly
            for k in 1..q2 - 1 {
                let g = GroupElem::from_witt_unit(z.pow(k))?;
                if engine.classify_linear(&g)? != Linearity::Linear {
                    return Ok((false, format!("Teichmüller power z^{k} misclassified")));
                }
            }
            for c in 1..2 * p {
                if c % p == 0 {
                    continue;
                }
                let g = GroupElem::from_witt_unit(WittElem::from_u64(params, c))?;
                if engine.classify_linear(&g)? != Linearity::Linear {
                    return Ok((false, format!("central unit {c} misclassified")));
                }
            }

            // unit α_1 gives a nonlinear witness in degree 2
            for _ in 0..5 {
                let g =
                    GroupElem::new(random_unit(params, &mut rng), random_unit(params, &mut rng))?;
                if engine.classify_linear(&g)? != (Linearity::Nonlinear { witness_degree: 2 }) {
                    return Ok((false, "α1 unit without degree-2 witness".into()));
                }
            }

            // random Witt units match the (σ(α)/α)^{p+1} = 1 criterion
            for _ in 0..10 {
                let alpha = random_unit(params, &mut rng);
                let beta = alpha.frobenius().mul(&alpha.inv()?);
                let criterion = beta.pow(p + 1).eq_mod(&WittElem::one(params), 16);
                let got = engine.classify_linear(&GroupElem::from_witt_unit(alpha)?)?;
                if criterion != matches!(got, Linearity::Linear) {
                    return Ok((false, "criterion/series mismatch".into()));
                }
            }
            Ok((
                true,
                "Teichmüller and central elements linear; α1 units witness degree 2".into(),
            ))
        };
        let (pass, detail) = match run() {
            Ok((pass, detail)) => (pass, detail),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check::new(
            format!("linearity classification at p={p}"),
            pass,
            detail,
        ));
    }
    checks
}
