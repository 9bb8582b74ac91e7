//! The height-2 stabilizer group `(W(F_{q^2})⟨S⟩/(S^2 = p, ω̄S = Sω))^×` and
//! its action on the deformation ring, computed three independent ways.
//!
//! Writing `(α_0 + α_1 S).u_1 = Σ γ_n u_1^n`, every engine here ultimately
//! determines the `γ_n` degree by degree. The recursive and tree engines run
//! the same index-set recursion (they compute the same sum over labelled
//! trees, organized by the root label), while the functional engine solves
//! the fractional-linear equation on the Cartier coordinate using series
//! obtained from stabilized matrix partial products — a route that shares no
//! closed formula with the other two.
//!
//! # Composition convention and its limits
//!
//! The 2x2 Cartier matrices satisfy `M(g·h) = M(h)·M(g)` exactly, which
//! forces the convention `Γ_{g·h} = Γ_h ∘ Γ_g` wherever the computed series
//! assemble into a group action. On the Witt subgroup (`α_1 = 0`) that
//! composition law holds exactly at full precision, and it holds mod p for
//! arbitrary elements. Beyond mod p it fails for `α_1 ≠ 0`: the degree-1
//! coefficient `γ_1 = σ(α_0)/α_0` is not multiplicative under the
//! presentation product (the `α_0`-component of a product acquires the
//! `p·α_1σ(β_1)` correction), so no order convention can repair it. This is
//! inherited from the defining functional equation, whose constant term reads
//! `0 = p·α_1` and which therefore only constrains degrees ≥ 1. Consequently
//! the `u`-coefficients `θ_n` also lose integrality for `α_1 ≠ 0` in degrees
//! past roughly `q + 2`, and [`ActionEngine::act_u`] reports
//! `IntegralityViolation` there rather than emit coefficients outside the
//! Witt ring. All `α_1 = 0` specializations are exact at full precision and
//! are verified against the golden series tables.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::lambda::{enumerate_weak_compositions, LambdaTable};
use crate::series::{self, ScaledSeries};
use crate::trees::{self, TreeEnumerator};
use crate::witt::{ScaledWitt, WittElem, WittParams};
use crate::Result;

/// An element `α_0 + α_1·S` with `α_0` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElem {
    alpha0: WittElem,
    alpha1: WittElem,
}

impl GroupElem {
    pub fn new(alpha0: WittElem, alpha1: WittElem) -> Result<Self> {
        if !alpha0.is_unit() {
            return Err(Error::NonUnit);
        }
        Ok(GroupElem { alpha0, alpha1 })
    }

    /// An element of the ambient order without the unit constraint (e.g. `S`
    /// itself); such elements multiply but do not act.
    pub fn order_element(alpha0: WittElem, alpha1: WittElem) -> Self {
        GroupElem { alpha0, alpha1 }
    }

    pub fn identity(params: &Arc<WittParams>) -> Self {
        GroupElem {
            alpha0: WittElem::one(params),
            alpha1: WittElem::zero(params),
        }
    }

    pub fn from_witt_unit(alpha: WittElem) -> Result<Self> {
        let zero = WittElem::zero(alpha.params());
        Self::new(alpha, zero)
    }

    pub fn alpha0(&self) -> &WittElem {
        &self.alpha0
    }

    pub fn alpha1(&self) -> &WittElem {
        &self.alpha1
    }

    pub fn params(&self) -> &Arc<WittParams> {
        self.alpha0.params()
    }

    pub fn is_witt(&self) -> bool {
        self.alpha1.is_zero()
    }

    /// Multiplication from `S^2 = p` and `S·ω = σ(ω)·S`:
    /// `(α_0 + α_1S)(β_0 + β_1S) = (α_0β_0 + p·α_1σ(β_1)) + (α_0β_1 + α_1σ(β_0))S`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let a0 = self
            .alpha0
            .mul(&rhs.alpha0)
            .add(&self.alpha1.mul(&rhs.alpha1.frobenius()).mul_pow_p(1));
        let a1 = self
            .alpha0
            .mul(&rhs.alpha1)
            .add(&self.alpha1.mul(&rhs.alpha0.frobenius()));
        GroupElem {
            alpha0: a0,
            alpha1: a1,
        }
    }
}

/// Which algorithm produced an [`ActionResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Recursive,
    Trees,
    Functional,
    WittAlt,
    WittRecursion,
    LowDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    U1,
    U,
}

/// Linearity of `g.u_1` to the engine truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linearity {
    Linear,
    Nonlinear { witness_degree: usize },
}

/// A computed coefficient table with precision metadata.
#[derive(Clone, Debug)]
pub struct ActionResult {
    /// Integral coefficient series: `γ_n`, `θ_n`, `δ_m`, or `τ_n` values
    /// placed at their `u_1`-degrees.
    pub series: ScaledSeries,
    pub method: Method,
    pub target: Target,
    /// Guaranteed output precision: coefficients are correct mod `p^M`.
    pub m_exp: u32,
    /// Truncation order of the series.
    pub wmax: usize,
    /// Worst denominator exponent used anywhere in the computation.
    pub max_denom_seen: u32,
}

impl ActionResult {
    pub fn coeff(&self, n: usize) -> WittElem {
        self.series.coeff(n).normalize().num().clone()
    }

    pub fn eq_mod(&self, rhs: &ActionResult, m_exp: u32) -> bool {
        self.series.eq_mod(&rhs.series, m_exp)
    }
}

/// Lazily filled table of the power-series powers `[u^s] G^L` where
/// `G = Σ_{k≥1} γ_k u^k`; row 1 is the `γ` sequence itself and higher rows
/// are completed column by column as new coefficients become known.
struct PowerTable {
    wmax: usize,
    rows: Vec<Vec<WittElem>>,
    filled: usize,
}

impl PowerTable {
    fn new(params: &Arc<WittParams>, wmax: usize) -> Self {
        let zero = WittElem::zero(params);
        let mut rows = vec![vec![zero.clone(); wmax]; wmax.max(1)];
        if !rows.is_empty() {
            rows[0][0] = WittElem::one(params);
        }
        PowerTable {
            wmax,
            rows,
            filled: 0,
        }
    }

    /// Complete all columns through `upto` for rows `L ≥ 2`, using `gammas`
    /// entries strictly below `upto`.
    fn advance(&mut self, gammas: &[WittElem], upto: usize) {
        while self.filled < upto {
            let s = self.filled + 1;
            for l in 2..=s.min(self.wmax - 1) {
                let mut acc = WittElem::zero(gammas[0].params());
                for (k, g) in gammas.iter().enumerate().take(s - l + 2).skip(1) {
                    if g.is_zero() {
                        continue;
                    }
                    let prev = &self.rows[l - 1][s - k];
                    if prev.is_zero() {
                        continue;
                    }
                    acc = acc.add(&g.mul(prev));
                }
                self.rows[l][s] = acc;
            }
            self.filled = s;
        }
    }

    fn set_gamma(&mut self, n: usize, value: WittElem) {
        self.rows[1][n] = value;
    }

    /// `[u^s] G^L`, assuming the table has advanced far enough.
    fn value(&self, l: u64, s: usize) -> &WittElem {
        &self.rows[l as usize][s]
    }
}

/// Shared per-run state for the action computations at fixed `(p, f, M, W)`.
pub struct ActionEngine {
    params: Arc<WittParams>,
    m_exp: u32,
    wmax: usize,
    budget: u32,
    lambda: LambdaTable,
    /// Weights up to which the tree engine re-checks itself against
    /// brute-force enumeration.
    tree_check_weight: u64,
}

impl ActionEngine {
    /// Build an engine computing mod `(p^M, u_1^W)`. The Witt ring precision
    /// is `N = M + W`, reserving the denominator budget `W`.
    pub fn new(p: u64, f: u32, m_exp: u32, wmax: usize) -> Result<Self> {
        if m_exp == 0 || wmax == 0 {
            return Err(Error::ZeroPrecision);
        }
        let params = WittParams::new(p, f, m_exp + wmax as u32)?;
        Ok(Self::with_params(params, m_exp, wmax))
    }

    /// Use preconstructed parameters; `params.n_exp()` must cover
    /// `m_exp + wmax`.
    pub fn with_params(params: Arc<WittParams>, m_exp: u32, wmax: usize) -> Self {
        assert!(wmax >= 1, "the truncation order must be at least 1");
        assert!(
            params.n_exp() >= m_exp + wmax as u32,
            "Witt precision too small for the requested output precision"
        );
        let lambda = LambdaTable::new(params.q(), wmax as u64);
        ActionEngine {
            params,
            m_exp,
            wmax,
            budget: wmax as u32,
            lambda,
            tree_check_weight: 4,
        }
    }

    pub fn tree_check_weight(mut self, weight: u64) -> Self {
        self.tree_check_weight = weight;
        self
    }

    pub fn params(&self) -> &Arc<WittParams> {
        &self.params
    }
    pub fn m_exp(&self) -> u32 {
        self.m_exp
    }
    pub fn wmax(&self) -> usize {
        self.wmax
    }

    pub fn parse(&self, text: &str) -> Result<WittElem> {
        crate::witt::parse_elem(text, &self.params)
    }

    fn check_unit(&self, g: &GroupElem) -> Result<WittElem> {
        if !g.alpha0.is_unit() {
            return Err(Error::NonUnit);
        }
        g.alpha0.inv()
    }

    /// Dispatch on method.
    pub fn act_u1(&self, g: &GroupElem, method: Method) -> Result<ActionResult> {
        match method {
            Method::Recursive => self.act_u1_recursive(g),
            Method::Trees => self.act_u1_trees(g),
            Method::Functional => self.act_u1_functional(g),
            Method::WittAlt => {
                if !g.is_witt() {
                    return Err(Error::Internal(
                        "the Witt-subgroup method needs α_1 = 0".into(),
                    ));
                }
                self.witt_act_u1(&g.alpha0)
            }
            Method::WittRecursion => {
                if !g.is_witt() {
                    return Err(Error::Internal(
                        "the Witt-subgroup method needs α_1 = 0".into(),
                    ));
                }
                self.witt_act_u1_recursion(&g.alpha0)
            }
            Method::LowDegree => Err(Error::Internal(
                "the low-degree table is not a series method".into(),
            )),
        }
    }

    // -- recursive engine ----------------------------------------------

    /// Sparse table of the label sums
    /// `c[L][m] = Σ_{QH=L, QI=m} (−1)^{|H|} σ^{|I|}(α_{|H|+|I|−1}) / p^{⌊(|H|+|I|−1)/2⌋}`.
    fn cell_table(&self, g: &GroupElem) -> HashMap<(u64, u64), ScaledWitt> {
        let mut cells = HashMap::new();
        let attained = self.lambda.attained_values();
        for &l in &attained {
            for &m in &attained {
                if l + m >= self.wmax as u64 {
                    continue;
                }
                let mut acc = ScaledWitt::zero(&self.params);
                for h in self.lambda.with_value(l) {
                    for i in self.lambda.with_value(m) {
                        acc = acc.add(&trees::label_term(h, i, &g.alpha0, &g.alpha1));
                    }
                }
                if !acc.is_zero() {
                    cells.insert((l, m), acc.normalize());
                }
            }
        }
        cells
    }

    fn solve_degree(
        &self,
        cells: &HashMap<(u64, u64), ScaledWitt>,
        table: &PowerTable,
        gammas: &[WittElem],
        n: usize,
        inv0: &WittElem,
        high: &mut u32,
    ) -> Result<WittElem> {
        let mut acc = ScaledWitt::zero(&self.params);
        for (&(l, m), cell) in cells.iter() {
            if m > n as u64 {
                continue;
            }
            let s = n - m as usize;
            if l > s as u64 {
                continue;
            }
            if l == 1 && m == 0 {
                continue; // the unknown γ_n·α_0 summand
            }
            let pw = if l == 1 {
                &gammas[s]
            } else {
                table.value(l, s)
            };
            if pw.is_zero() {
                continue;
            }
            acc = acc.add(&cell.mul_witt(pw));
        }
        *high = (*high).max(acc.denom_exp());
        if acc.denom_exp() > self.budget {
            return Err(Error::PrecisionBudget {
                needed: acc.denom_exp(),
                budget: self.budget,
            });
        }
        acc.mul_witt(inv0)
            .to_integral()
            .map_err(|_| Error::IntegralityViolation { degree: n })
    }

    /// Direct recursion over the index sets, with the ordered-composition
    /// sums collapsed into cached power-series powers. Never enumerates
    /// trees.
    pub fn act_u1_recursive(&self, g: &GroupElem) -> Result<ActionResult> {
        let inv0 = self.check_unit(g)?;
        let cells = self.cell_table(g);
        let mut gammas = vec![WittElem::zero(&self.params); self.wmax];
        let mut table = PowerTable::new(&self.params, self.wmax);
        let mut high = 0u32;
        for n in 1..self.wmax {
            table.advance(&gammas, n);
            let gamma = self.solve_degree(&cells, &table, &gammas, n, &inv0, &mut high)?;
            table.set_gamma(n, gamma.clone());
            gammas[n] = gamma;
        }
        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                gammas,
            ),
            method: Method::Recursive,
            target: Target::U1,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    /// The sum of `(α_0, α_1)`-indices over labelled trees of each weight,
    /// evaluated by the root-label recursion (one term per root label, with
    /// child tuples read from cached powers) and cross-checked at low
    /// weights against brute-force enumeration.
    pub fn act_u1_trees(&self, g: &GroupElem) -> Result<ActionResult> {
        let inv0 = self.check_unit(g)?;
        let mut gammas = vec![WittElem::zero(&self.params); self.wmax];
        let mut table = PowerTable::new(&self.params, self.wmax);
        let mut high = 0u32;
        for n in 1..self.wmax {
            table.advance(&gammas, n);
            let mut acc = ScaledWitt::zero(&self.params);
            for m in 0..=n as u64 {
                for i in self.lambda.with_value(m) {
                    let s = n - m as usize;
                    for l in 0..=s as u64 {
                        if l == 1 && m == 0 {
                            continue;
                        }
                        for h in self.lambda.with_value(l) {
                            let pw = if l == 1 {
                                &gammas[s]
                            } else {
                                table.value(l, s)
                            };
                            if pw.is_zero() {
                                continue;
                            }
                            let term = trees::label_term(h, i, &g.alpha0, &g.alpha1);
                            acc = acc.add(&term.mul_witt(pw));
                        }
                    }
                }
            }
            high = high.max(acc.denom_exp());
            if acc.denom_exp() > self.budget {
                return Err(Error::PrecisionBudget {
                    needed: acc.denom_exp(),
                    budget: self.budget,
                });
            }
            let gamma = acc
                .mul_witt(&inv0)
                .to_integral()
                .map_err(|_| Error::IntegralityViolation { degree: n })?;
            table.set_gamma(n, gamma.clone());
            gammas[n] = gamma;
        }

        // Brute-force oracle at desk scale.
        let mut enumerator = TreeEnumerator::new(self.params.q());
        for w in 1..=self.tree_check_weight.min(self.wmax as u64 - 1) {
            let mut sum = ScaledWitt::zero(&self.params);
            for t in enumerator.enumerate(w, false)?.iter() {
                sum = sum.add(&trees::index(t, &g.alpha0, &g.alpha1)?);
            }
            if !sum.eq_mod(
                &ScaledWitt::from_witt(gammas[w as usize].clone()),
                self.m_exp,
            ) {
                return Err(Error::Internal(format!(
                    "tree-sum oracle disagrees with the recursion at weight {w}"
                )));
            }
        }

        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                gammas,
            ),
            method: Method::Trees,
            target: Target::U1,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    // -- functional-equation engine --------------------------------------

    /// Solve `f_1(Γ)·(σ(α_1)f_1 + α_0 f) = f(Γ)·(σ(α_0)f_1 + p·α_1 f)` for Γ
    /// degree by degree, with `f, f_1` taken from stabilized matrix partial
    /// products rather than the closed index-set formulas.
    pub fn act_u1_functional(&self, g: &GroupElem) -> Result<ActionResult> {
        let inv0 = self.check_unit(g)?;
        let (f, f1) = series::stabilized_f_f1(&self.params, self.wmax, self.budget)?;
        let p_series = f1
            .scale_witt(&g.alpha1.frobenius())
            .add(&f.scale_witt(&g.alpha0))?;
        let q_series = f1
            .scale_witt(&g.alpha0.frobenius())
            .add(&f.scale_witt(&g.alpha1.mul_pow_p(1)))?;

        let mut gammas = vec![WittElem::zero(&self.params); self.wmax];
        let mut table = PowerTable::new(&self.params, self.wmax);
        let mut high = f.high_water().max(f1.high_water());
        // comp1 = f_1 ∘ Γ and comp0 = f ∘ Γ, completed degree by degree.
        let mut comp1 = vec![ScaledWitt::zero(&self.params); self.wmax];
        let mut comp0 = vec![ScaledWitt::zero(&self.params); self.wmax];
        comp0[0] = f.coeff(0);
        let f1_support: Vec<usize> = (0..self.wmax).filter(|&k| !f1.coeff(k).is_zero()).collect();
        let f_support: Vec<usize> = (0..self.wmax).filter(|&k| !f.coeff(k).is_zero()).collect();

        for n in 1..self.wmax {
            table.advance(&gammas, n);
            // complete column n of the composites, except the γ_n term of
            // comp1 which enters through f_1's degree-1 coefficient
            let mut c1 = ScaledWitt::zero(&self.params);
            for &k in &f1_support {
                if k > n || k == 1 {
                    continue;
                }
                let pw = table.value(k as u64, n);
                if !pw.is_zero() {
                    c1 = c1.add(&f1.coeff(k).mul_witt(pw));
                }
            }
            let mut c0 = ScaledWitt::zero(&self.params);
            for &k in &f_support {
                if k > n {
                    continue;
                }
                let pw = if k == 1 {
                    gammas[n].clone()
                } else {
                    table.value(k as u64, n).clone()
                };
                if !pw.is_zero() {
                    c0 = c0.add(&f.coeff(k).mul_witt(&pw));
                }
            }
            comp1[n] = c1;
            comp0[n] = c0;

            // residual of degree n with γ_n set to zero
            let mut residual = ScaledWitt::zero(&self.params);
            for j in 0..=n {
                if !comp1[j].is_zero() {
                    residual = residual.add(&comp1[j].mul(&p_series.coeff(n - j)));
                }
                if !comp0[j].is_zero() {
                    residual = residual.sub(&comp0[j].mul(&q_series.coeff(n - j)));
                }
            }
            high = high.max(residual.denom_exp());
            if residual.denom_exp() > self.budget {
                return Err(Error::PrecisionBudget {
                    needed: residual.denom_exp(),
                    budget: self.budget,
                });
            }
            // residual + γ_n·(f_1 coeff 1)·(P coeff 0) = 0 with P(0) = α_0
            let gamma = residual
                .neg()
                .mul_witt(&inv0)
                .to_integral()
                .map_err(|_| Error::IntegralityViolation { degree: n })?;
            // fold γ_n into the composite for later degrees
            comp1[n] = comp1[n].add(&f1.coeff(1).mul_witt(&gamma));
            table.set_gamma(n, gamma.clone());
            gammas[n] = gamma;
        }

        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                gammas,
            ),
            method: Method::Functional,
            target: Target::U1,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    // -- action on u ------------------------------------------------------

    /// `(α_0 + α_1S).u = (Σ θ_n u_1^n)·u` via
    /// `Θ = (σ(α_1)f_1 + α_0 f) / (f ∘ Γ)`, cross-checked against the
    /// divisionless recursion `θ_n = x_n − Σ_{i<n} θ_i y_{n−i}`.
    pub fn act_u(&self, g: &GroupElem, u1_method: Method) -> Result<ActionResult> {
        if self.params.f() % 2 == 0 {
            return Err(Error::EvenResidueDegree { f: self.params.f() });
        }
        self.check_unit(g)?;
        let gamma = self.act_u1(g, u1_method)?;
        let f = series::f_series(&self.params, self.wmax, self.budget)?;
        let f1 = series::f1_series(&self.params, self.wmax, self.budget)?;
        let x_series = f1
            .scale_witt(&g.alpha1.frobenius())
            .add(&f.scale_witt(&g.alpha0))?;
        let f_gamma = ScaledSeries::compose(&f, &gamma.series)?;
        let theta = x_series.mul(&f_gamma.invert_unit()?)?;

        // recursion cross-check
        for n in 0..self.wmax {
            let mut acc = x_series.coeff(n);
            for i in 0..n {
                acc = acc.sub(&theta.coeff(i).mul(&f_gamma.coeff(n - i)));
            }
            if !acc.eq_mod(&theta.coeff(n), self.m_exp) {
                return Err(Error::Internal(format!(
                    "u-action recursion check failed at degree {n}"
                )));
            }
        }
        // product identity Θ·(f∘Γ) = σ(α_1)f_1 + α_0 f
        if !theta.mul(&f_gamma)?.eq_mod(&x_series, self.m_exp) {
            return Err(Error::Internal("u-action product identity failed".into()));
        }

        let coeffs = theta.to_integral_coeffs().map_err(|e| match e {
            Error::IntegralityViolation { degree } => Error::IntegralityViolation { degree },
            other => other,
        })?;
        let high = theta.high_water().max(gamma.max_denom_seen);
        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                coeffs,
            ),
            method: gamma.method,
            target: Target::U,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    // -- Witt-subgroup specializations -------------------------------------

    /// `α.u_1` for `α ∈ W(F_{q^2})^×`, by the alternating specialization of
    /// the recursion; the result is supported in degrees `≡ 1 mod p+1`.
    pub fn witt_act_u1(&self, alpha: &WittElem) -> Result<ActionResult> {
        if self.params.f() % 2 == 0 {
            return Err(Error::EvenResidueDegree { f: self.params.f() });
        }
        if !alpha.is_unit() {
            return Err(Error::NonUnit);
        }
        let beta = alpha.frobenius().mul(&alpha.inv()?);
        // cells of the specialized recursion: only opposite-parity labels
        // survive, and the 1/α prefactor is already folded in
        let attained = self.lambda.attained_values();
        let mut cells: HashMap<(u64, u64), ScaledWitt> = HashMap::new();
        for &l in &attained {
            for &m in &attained {
                if l + m >= self.wmax as u64 {
                    continue;
                }
                let mut acc = ScaledWitt::zero(&self.params);
                for h in self.lambda.with_value(l) {
                    for i in self.lambda.with_value(m) {
                        let sum = h.len() + i.len();
                        if sum % 2 != 1 {
                            continue;
                        }
                        let e = (sum as u32 - 1) / 2;
                        let term = if h.len() % 2 == 0 {
                            ScaledWitt::new(beta.clone(), e)
                        } else {
                            ScaledWitt::new(WittElem::one(&self.params).neg(), e)
                        };
                        acc = acc.add(&term);
                    }
                }
                if !acc.is_zero() {
                    cells.insert((l, m), acc.normalize());
                }
            }
        }

        let p = self.params.p();
        let mut gammas = vec![WittElem::zero(&self.params); self.wmax];
        let mut table = PowerTable::new(&self.params, self.wmax);
        let mut high = 0u32;
        for n in 1..self.wmax {
            table.advance(&gammas, n);
            let mut acc = ScaledWitt::zero(&self.params);
            for (&(l, m), cell) in cells.iter() {
                if m > n as u64 || l > (n - m as usize) as u64 || (l == 1 && m == 0) {
                    continue;
                }
                let s = n - m as usize;
                let pw = if l == 1 {
                    &gammas[s]
                } else {
                    table.value(l, s)
                };
                if pw.is_zero() {
                    continue;
                }
                acc = acc.add(&cell.mul_witt(pw));
            }
            high = high.max(acc.denom_exp());
            if acc.denom_exp() > self.budget {
                return Err(Error::PrecisionBudget {
                    needed: acc.denom_exp(),
                    budget: self.budget,
                });
            }
            let gamma = acc
                .to_integral()
                .map_err(|_| Error::IntegralityViolation { degree: n })?;
            if n as u64 % (p + 1) != 1 && !gamma.is_zero_mod(self.m_exp) {
                return Err(Error::Internal(format!(
                    "degree concentration violated at n = {n}"
                )));
            }
            table.set_gamma(n, gamma.clone());
            gammas[n] = gamma;
        }
        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                gammas,
            ),
            method: Method::WittAlt,
            target: Target::U1,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    /// The weak-composition recursion for `δ_0, …, δ_{p−1}` when `q = p`,
    /// valid mod `u_1^{p^2+1}`: the result series is truncated accordingly.
    pub fn witt_act_u1_recursion(&self, alpha: &WittElem) -> Result<ActionResult> {
        let p = self.params.p();
        if self.params.q() != p {
            return Err(Error::QMustEqualP {
                q: self.params.q(),
                p,
            });
        }
        if !alpha.is_unit() {
            return Err(Error::NonUnit);
        }
        let beta = alpha.frobenius().mul(&alpha.inv()?);
        let mut delta: Vec<ScaledWitt> = vec![ScaledWitt::from_witt(beta.clone())];
        let mut high = 0u32;
        for m in 1..p {
            // δ_m = −δ_{m−1}/p + Σ_{K} (β/p)·Π_k δ_k over length-(p+1) weak
            // compositions K of m−1, plus (β − β^{p^2}) when m = p−1.
            let mut acc = delta[(m - 1) as usize].div_pow_p(1).neg();
            for comp in enumerate_weak_compositions(m - 1, (p + 1) as usize) {
                let mut prod = ScaledWitt::new(beta.clone(), 1);
                for &k in comp.entries() {
                    prod = prod.mul(&delta[k as usize]);
                }
                acc = acc.add(&prod);
            }
            if m == p - 1 {
                acc = acc.add(&ScaledWitt::from_witt(beta.sub(&beta.pow(p * p))));
            }
            high = high.max(acc.denom_exp());
            if acc.denom_exp() > self.budget {
                return Err(Error::PrecisionBudget {
                    needed: acc.denom_exp(),
                    budget: self.budget,
                });
            }
            delta.push(acc.normalize());
        }
        let wmax = self.wmax.min((p * p + 1) as usize);
        let mut coeffs = vec![WittElem::zero(&self.params); wmax];
        for (m, d) in delta.iter().enumerate() {
            let deg = 1 + (p + 1) as usize * m;
            if deg < wmax {
                coeffs[deg] = d
                    .to_integral()
                    .map_err(|_| Error::IntegralityViolation { degree: deg })?;
            }
        }
        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(&self.params, wmax, self.budget, coeffs),
            method: Method::WittRecursion,
            target: Target::U1,
            m_exp: self.m_exp,
            wmax,
            max_denom_seen: high,
        })
    }

    /// `α.u = (Σ τ_n u_1^{(p+1)n})·u` for `α ∈ W(F_{q^2})^×`, f odd, via
    /// `T = α·f / (f ∘ (α.u_1))`, cross-checked against the solved recursion.
    pub fn witt_act_u(&self, alpha: &WittElem) -> Result<ActionResult> {
        if self.params.f() % 2 == 0 {
            return Err(Error::EvenResidueDegree { f: self.params.f() });
        }
        if !alpha.is_unit() {
            return Err(Error::NonUnit);
        }
        let p = self.params.p();
        let delta = self.witt_act_u1(alpha)?;
        let f = series::f_series(&self.params, self.wmax, self.budget)?;
        let x_series = f.scale_witt(alpha);
        let f_delta = ScaledSeries::compose(&f, &delta.series)?;
        let tau = x_series.mul(&f_delta.invert_unit()?)?;
        // support check: everything lives in degrees divisible by p+1
        for n in 0..self.wmax {
            if n as u64 % (p + 1) != 0 && !tau.coeff(n).is_zero() {
                return Err(Error::Internal(format!(
                    "u-action support violated at degree {n}"
                )));
            }
        }
        // recursion cross-check: τ_n = x_n − Σ_{i<n} τ_i y_{n−i} in the
        // reindexed variable u_1^{p+1}
        for n in 0..self.wmax {
            if n as u64 % (p + 1) != 0 {
                continue;
            }
            let mut acc = x_series.coeff(n);
            let mut i = 0usize;
            while i < n {
                acc = acc.sub(&tau.coeff(i).mul(&f_delta.coeff(n - i)));
                i += (p + 1) as usize;
            }
            if !acc.eq_mod(&tau.coeff(n), self.m_exp) {
                return Err(Error::Internal(format!(
                    "Witt u-action recursion check failed at degree {n}"
                )));
            }
        }
        let coeffs = tau.to_integral_coeffs()?;
        let high = tau.high_water().max(delta.max_denom_seen);
        Ok(ActionResult {
            series: ScaledSeries::from_integral_coeffs(
                &self.params,
                self.wmax,
                self.budget,
                coeffs,
            ),
            method: Method::WittAlt,
            target: Target::U,
            m_exp: self.m_exp,
            wmax: self.wmax,
            max_denom_seen: high,
        })
    }

    /// The four closed low-degree coefficients of `α.u_1` at degrees
    /// `1, p+2, 2p+3, 3p+4` for `q = p`, as scaled Witt values; entries are
    /// only meaningful below degree `p^2` (all four precisely when p ≥ 5).
    pub fn low_degree_closed(&self, alpha: &WittElem) -> Result<Vec<(usize, ScaledWitt)>> {
        let p = self.params.p();
        if self.params.q() != p {
            return Err(Error::QMustEqualP {
                q: self.params.q(),
                p,
            });
        }
        if !alpha.is_unit() {
            return Err(Error::NonUnit);
        }
        let beta = alpha.frobenius().mul(&alpha.inv()?);
        let bq = beta.pow(p + 1);
        let one = WittElem::one(&self.params);
        let t = bq.sub(&one); // β^{p+1} − 1
        let lead = bq.mul_u64(p + 1).sub(&one); // (p+1)β^{p+1} − 1
        let d1 = ScaledWitt::from_witt(beta.clone());
        let d2 = ScaledWitt::new(beta.mul(&t), 1);
        let d3 = ScaledWitt::new(beta.mul(&t).mul(&lead), 2);
        let binom = p * (p + 1) / 2;
        let bracket = lead.mul(&lead).add(&bq.mul(&t).mul_u64(binom));
        let d4 = ScaledWitt::new(beta.mul(&t).mul(&bracket), 3);
        Ok(vec![
            (1, d1.normalize()),
            ((p + 2) as usize, d2.normalize()),
            ((2 * p + 3) as usize, d3.normalize()),
            ((3 * p + 4) as usize, d4.normalize()),
        ])
    }

    /// Apply `g` to a ring element written as `s(u_1)·u^d`: substitute
    /// `u_1 ↦ Γ_g(u_1)` coefficientwise and multiply by `Θ_g(u_1)^d`.
    pub fn act_on_ring_element(
        &self,
        g: &GroupElem,
        s: &ScaledSeries,
        d: i64,
        u1_method: Method,
    ) -> Result<ScaledSeries> {
        let gamma = self.act_u1(g, u1_method)?;
        let substituted = ScaledSeries::compose(s, &gamma.series)?;
        if d == 0 {
            return Ok(substituted);
        }
        let theta = self.act_u(g, u1_method)?.series;
        let factor = if d > 0 {
            theta.pow(d as u32)?
        } else {
            theta.invert_unit()?.pow((-d) as u32)?
        };
        substituted.mul(&factor)
    }

    /// Is `g.u_1 = c·u_1` to the engine truncation? Returns the first
    /// nonlinear degree as witness otherwise. For `α ∈ W(F_{p^2})^×` the
    /// algebraic criterion `(σ(α)/α)^{p+1} = 1` is checked against the
    /// series answer.
    pub fn classify_linear(&self, g: &GroupElem) -> Result<Linearity> {
        self.check_unit(g)?;
        let gamma = self.act_u1_recursive(g)?;
        let mut series_answer = Linearity::Linear;
        for n in 2..self.wmax {
            if !gamma.coeff(n).is_zero_mod(self.m_exp) {
                series_answer = Linearity::Nonlinear { witness_degree: n };
                break;
            }
        }
        // The Witt-subgroup witness appears at degree p+2; the algebraic
        // criterion can only be cross-checked when the truncation sees it.
        let p = self.params.p();
        if g.is_witt() && self.params.q() == p && self.wmax > (p + 2) as usize {
            let alpha = &g.alpha0;
            let beta = alpha.frobenius().mul(&alpha.inv()?);
            let criterion = beta
                .pow(p + 1)
                .eq_mod(&WittElem::one(&self.params), self.m_exp);
            if criterion != matches!(series_answer, Linearity::Linear) {
                return Err(Error::Internal(
                    "linearity criterion disagrees with the computed series".into(),
                ));
            }
        }
        Ok(series_answer)
    }
}

/// The worked closed forms for `γ_1, …, γ_4`, with the `q = 2` and `q = 3`
/// branch cases.
pub fn closed_gamma_low(g: &GroupElem, q: u64) -> Result<Vec<ScaledWitt>> {
    let a0 = g.alpha0();
    let a1 = g.alpha1();
    if !a0.is_unit() {
        return Err(Error::NonUnit);
    }
    let params = a0.params().clone();
    let inv0 = a0.inv()?;
    let b0 = a0.frobenius();
    let b1 = a1.frobenius();
    let g1 = ScaledWitt::from_witt(b0.mul(&inv0));
    let g2 = ScaledWitt::from_witt(b0.mul(&b1).mul(&inv0.pow(2)).neg());
    let g3 = if q == 2 {
        // (N(α_0)·σ(α_1)^2 + (α_0^3 + σ(α_0)^3)·α_1) / α_0^4
        let num = a0
            .norm()
            .mul(&b1.pow(2))
            .add(&a0.pow(3).add(&b0.pow(3)).mul(a1));
        ScaledWitt::from_witt(num.mul(&inv0.pow(4)))
    } else {
        ScaledWitt::from_witt(b0.mul(&b1.pow(2)).mul(&inv0.pow(3)))
    };
    let g4 = match q {
        2 => {
            // (N(α_0)(−σ(α_1)^3 + (1 − 1/p)(α_0^3 − σ(α_0)^3))
            //  − N(α_1)(α_0^3 + 4σ(α_0)^3)) / α_0^5
            let p = params.p();
            let cube_diff = a0.pow(3).sub(&b0.pow(3));
            let t1 = ScaledWitt::from_witt(a0.norm().mul(&b1.pow(3)).neg());
            let t2 = ScaledWitt::new(a0.norm().mul(&cube_diff).mul_u64(p - 1), 1);
            let t3 =
                ScaledWitt::from_witt(a1.norm().mul(&a0.pow(3).add(&b0.pow(3).mul_u64(4))).neg());
            t1.add(&t2).add(&t3).mul_witt(&inv0.pow(5))
        }
        3 => {
            // ((α_0^4 + σ(α_0)^4)α_1 − N(α_0)σ(α_1)^3) / α_0^5
            let num = a0
                .pow(4)
                .add(&b0.pow(4))
                .mul(a1)
                .sub(&a0.norm().mul(&b1.pow(3)));
            ScaledWitt::from_witt(num.mul(&inv0.pow(5)))
        }
        _ => ScaledWitt::from_witt(b0.mul(&b1.pow(3)).mul(&inv0.pow(4)).neg()),
    };
    Ok(vec![g1, g2, g3, g4])
}
