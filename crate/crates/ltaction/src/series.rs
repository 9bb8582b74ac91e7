//! Truncated power series in `u_1` over the Witt ring, with an explicit
//! power-of-p denominator exponent, plus the Cartier coordinate-change
//! series and two independent constructions of them.
//!
//! A [`ScaledSeries`] with denominator exponent `B` stores numerators mod
//! `p^N`; the coefficient of `u_1^n` means `coeffs[n] / p^B`. Arithmetic
//! keeps the representation exact and re-normalizes to the smallest exponent;
//! a per-series budget (by convention the `u_1` truncation order, matching
//! the precision reserve `N − M`) bounds the exponent any operation may
//! produce, and exceeding it is a hard error rather than a silent truncation.
//! The worst exponent seen while producing a series is tracked in
//! [`ScaledSeries::high_water`].

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lambda::{enumerate_lambda, LenParity};
use crate::witt::{ScaledWitt, WittElem, WittParams};
use crate::Result;

/// A `u_1`-truncated power series with Witt-element numerators and a global
/// power-of-p denominator exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSeries {
    params: Arc<WittParams>,
    wmax: usize,
    denom_exp: u32,
    budget: u32,
    high_water: u32,
    coeffs: Vec<WittElem>,
}

fn assert_compatible(a: &ScaledSeries, b: &ScaledSeries) {
    assert!(
        Arc::ptr_eq(&a.params, &b.params) || *a.params == *b.params,
        "series operands use different parameters"
    );
    assert_eq!(
        a.budget, b.budget,
        "series operands use different precision budgets"
    );
}

impl ScaledSeries {
    pub fn zero(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Self {
        ScaledSeries {
            params: params.clone(),
            wmax,
            denom_exp: 0,
            budget,
            high_water: 0,
            coeffs: vec![WittElem::zero(params); wmax],
        }
    }

    pub fn one(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Self {
        Self::monomial(
            params,
            wmax,
            budget,
            0,
            ScaledWitt::from_witt(WittElem::one(params)),
        )
    }

    /// The series `u_1`.
    pub fn u1(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Self {
        Self::monomial(
            params,
            wmax,
            budget,
            1,
            ScaledWitt::from_witt(WittElem::one(params)),
        )
    }

    /// `value · u_1^degree`, truncating to zero when out of range.
    pub fn monomial(
        params: &Arc<WittParams>,
        wmax: usize,
        budget: u32,
        degree: usize,
        value: ScaledWitt,
    ) -> Self {
        let mut s = Self::zero(params, wmax, budget);
        if degree < wmax {
            let v = value.normalize();
            s.denom_exp = v.denom_exp();
            s.high_water = v.denom_exp();
            s.coeffs[degree] = v.num().clone();
        }
        s
    }

    /// Assemble a series from per-degree scaled values, unifying denominators.
    pub fn from_scaled_coeffs(
        params: &Arc<WittParams>,
        wmax: usize,
        budget: u32,
        values: Vec<ScaledWitt>,
    ) -> Result<Self> {
        assert!(values.len() <= wmax);
        let normalized: Vec<ScaledWitt> = values.iter().map(ScaledWitt::normalize).collect();
        let exp = normalized
            .iter()
            .map(ScaledWitt::denom_exp)
            .max()
            .unwrap_or(0);
        if exp > budget {
            return Err(Error::PrecisionBudget {
                needed: exp,
                budget,
            });
        }
        let mut coeffs = Vec::with_capacity(wmax);
        for v in &normalized {
            coeffs.push(v.num().mul_pow_p(exp - v.denom_exp()));
        }
        coeffs.resize(wmax, WittElem::zero(params));
        Ok(ScaledSeries {
            params: params.clone(),
            wmax,
            denom_exp: exp,
            budget,
            high_water: exp,
            coeffs,
        })
    }

    pub fn from_integral_coeffs(
        params: &Arc<WittParams>,
        wmax: usize,
        budget: u32,
        mut coeffs: Vec<WittElem>,
    ) -> Self {
        coeffs.resize(wmax, WittElem::zero(params));
        coeffs.truncate(wmax);
        ScaledSeries {
            params: params.clone(),
            wmax,
            denom_exp: 0,
            budget,
            high_water: 0,
            coeffs,
        }
    }

    pub fn params(&self) -> &Arc<WittParams> {
        &self.params
    }
    pub fn wmax(&self) -> usize {
        self.wmax
    }
    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }
    pub fn budget(&self) -> u32 {
        self.budget
    }
    /// Worst denominator exponent used anywhere in the history of this series.
    pub fn high_water(&self) -> u32 {
        self.high_water
    }

    /// Coefficient of `u_1^n` as a scaled Witt value.
    pub fn coeff(&self, n: usize) -> ScaledWitt {
        ScaledWitt::new(self.coeffs[n].clone(), self.denom_exp)
    }

    pub fn coeffs_raw(&self) -> &[WittElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(WittElem::is_zero)
    }

    /// Divide out the largest common power of p from the numerators.
    fn normalize_in_place(&mut self) {
        if self.denom_exp == 0 {
            return;
        }
        let mut min_val = self.denom_exp;
        for c in &self.coeffs {
            match c.valuation() {
                None => {}
                Some(v) => min_val = min_val.min(v),
            }
            if min_val == 0 {
                return;
            }
        }
        if self.coeffs.iter().all(WittElem::is_zero) {
            self.denom_exp = 0;
            return;
        }
        for c in &mut self.coeffs {
            *c = c.exact_div_pow(min_val);
        }
        self.denom_exp -= min_val;
    }

    fn guard(&self, natural_exp: u32) -> Result<()> {
        if natural_exp > self.budget {
            return Err(Error::PrecisionBudget {
                needed: natural_exp,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        assert_compatible(self, rhs);
        let wmax = self.wmax.min(rhs.wmax);
        let exp = self.denom_exp.max(rhs.denom_exp);
        self.guard(exp)?;
        let mut coeffs = Vec::with_capacity(wmax);
        for n in 0..wmax {
            let a = self.coeffs[n].mul_pow_p(exp - self.denom_exp);
            let b = rhs.coeffs[n].mul_pow_p(exp - rhs.denom_exp);
            coeffs.push(a.add(&b));
        }
        let mut out = ScaledSeries {
            params: self.params.clone(),
            wmax,
            denom_exp: exp,
            budget: self.budget,
            high_water: self.high_water.max(rhs.high_water).max(exp),
            coeffs,
        };
        out.normalize_in_place();
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.neg();
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        assert_compatible(self, rhs);
        let wmax = self.wmax.min(rhs.wmax);
        let exp = self.denom_exp + rhs.denom_exp;
        self.guard(exp)?;
        let zero = WittElem::zero(&self.params);
        let mut coeffs = vec![zero; wmax];
        for (i, a) in self.coeffs.iter().enumerate().take(wmax) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(wmax - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut out = ScaledSeries {
            params: self.params.clone(),
            wmax,
            denom_exp: exp,
            budget: self.budget,
            high_water: self.high_water.max(rhs.high_water).max(exp),
            coeffs,
        };
        out.normalize_in_place();
        Ok(out)
    }

    /// Multiply by a scalar `num / p^e`.
    pub fn scale(&self, s: &ScaledWitt) -> Result<Self> {
        let s = s.normalize();
        let exp = self.denom_exp + s.denom_exp();
        self.guard(exp)?;
        let mut out = ScaledSeries {
            params: self.params.clone(),
            wmax: self.wmax,
            denom_exp: exp,
            budget: self.budget,
            high_water: self.high_water.max(exp),
            coeffs: self.coeffs.iter().map(|c| c.mul(s.num())).collect(),
        };
        out.normalize_in_place();
        Ok(out)
    }

    pub fn scale_witt(&self, s: &WittElem) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.mul(s);
        }
        out.normalize_in_place();
        out
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.params, self.wmax, self.budget);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `outer ∘ inner`; the inner series must kill the constant term.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        assert_compatible(outer, inner);
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let wmax = outer.wmax.min(inner.wmax);
        let mut acc = Self::zero(&outer.params, wmax, outer.budget);
        let mut power = Self::one(&outer.params, wmax, outer.budget);
        for k in 0..wmax {
            let ck = outer.coeff(k);
            if !ck.is_zero() {
                acc = acc.add(&power.scale(&ck)?)?;
            }
            if k + 1 < wmax {
                // inner has valuation ≥ 1, so power k+1 vanishes below degree k+1
                if k + 1 > wmax {
                    break;
                }
                power = power.mul(inner)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series whose constant term is a unit after
    /// clearing denominators.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.coeff(0).normalize();
        if c0.denom_exp() != 0 || !c0.num().is_unit() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.num().inv()?;
        let mut out: Vec<ScaledWitt> = Vec::with_capacity(self.wmax);
        out.push(ScaledWitt::from_witt(inv0.clone()));
        let mut high = self.high_water;
        for n in 1..self.wmax {
            // g_n = −inv0 · Σ_{k=1..n} s_k g_{n−k}
            let mut acc = ScaledWitt::zero(&self.params);
            for k in 1..=n {
                let sk = self.coeff(k);
                if sk.is_zero() {
                    continue;
                }
                acc = acc.add(&sk.mul(&out[n - k]));
            }
            let g = acc.mul_witt(&inv0).neg().normalize();
            high = high.max(g.denom_exp());
            if g.denom_exp() > self.budget {
                return Err(Error::PrecisionBudget {
                    needed: g.denom_exp(),
                    budget: self.budget,
                });
            }
            out.push(g);
        }
        let mut s = Self::from_scaled_coeffs(&self.params, self.wmax, self.budget, out)?;
        s.high_water = s.high_water.max(high);
        Ok(s)
    }

    pub fn truncate(&self, wmax: usize) -> Self {
        let mut out = self.clone();
        out.wmax = wmax.min(self.wmax);
        out.coeffs.truncate(out.wmax);
        out
    }

    /// Equality of values coefficientwise mod `p^m`.
    pub fn eq_mod(&self, rhs: &Self, m_exp: u32) -> bool {
        let wmax = self.wmax.min(rhs.wmax);
        (0..wmax).all(|n| self.coeff(n).eq_mod(&rhs.coeff(n), m_exp))
    }

    /// Extract integral coefficients, failing at the first degree whose value
    /// genuinely has a denominator.
    pub fn to_integral_coeffs(&self) -> Result<Vec<WittElem>> {
        let mut out = Vec::with_capacity(self.wmax);
        for n in 0..self.wmax {
            let c = self.coeff(n).normalize();
            if c.denom_exp() != 0 {
                return Err(Error::IntegralityViolation { degree: n });
            }
            out.push(c.num().clone());
        }
        Ok(out)
    }

    /// Serialize nonzero coefficients as exact records, coordinates reduced
    /// mod `p^{m_exp}`.
    pub fn to_records(&self, m_exp: u32) -> Vec<SeriesRecord> {
        let mut out = Vec::new();
        for n in 0..self.wmax {
            let c = self.coeff(n).normalize();
            let effective = m_exp + c.denom_exp();
            let coords = c.num().coords_mod(effective.min(self.params.n_exp()));
            if coords.iter().all(BigUint::is_zero) {
                continue;
            }
            out.push(SeriesRecord {
                n,
                denom_exp: c.denom_exp(),
                coeff: coords.iter().map(BigUint::to_string).collect(),
            });
        }
        out
    }

    /// Rebuild a series from serialized records.
    pub fn from_records(
        params: &Arc<WittParams>,
        wmax: usize,
        budget: u32,
        records: &[SeriesRecord],
    ) -> Result<Self> {
        let mut values = vec![ScaledWitt::zero(params); wmax];
        for r in records {
            if r.n >= wmax {
                continue;
            }
            let mut coords = Vec::with_capacity(params.deg());
            for s in &r.coeff {
                let v = s
                    .parse::<BigUint>()
                    .map_err(|e| Error::Syntax(e.to_string()))?;
                coords.push(v);
            }
            if coords.len() != params.deg() {
                return Err(Error::Syntax(format!(
                    "record at degree {} has {} coordinates, expected {}",
                    r.n,
                    coords.len(),
                    params.deg()
                )));
            }
            values[r.n] = ScaledWitt::new(WittElem::from_coords(params, coords), r.denom_exp);
        }
        Self::from_scaled_coeffs(params, wmax, budget, values)
    }
}

/// One exact coefficient record of the canonical series serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub n: usize,
    pub denom_exp: u32,
    /// Decimal numerator coordinates in the basis `1, z, …, z^{2f−1}`.
    pub coeff: Vec<String>,
}

/// A 2x2 matrix of series; the partial products of the coordinate-change
/// recursion live here.
#[derive(Clone, Debug)]
pub struct Series2x2 {
    pub a: ScaledSeries,
    pub b: ScaledSeries,
    pub c: ScaledSeries,
    pub d: ScaledSeries,
}

impl Series2x2 {
    pub fn identity(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Self {
        Series2x2 {
            a: ScaledSeries::one(params, wmax, budget),
            b: ScaledSeries::zero(params, wmax, budget),
            c: ScaledSeries::zero(params, wmax, budget),
            d: ScaledSeries::one(params, wmax, budget),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(Series2x2 {
            a: self.a.mul(&rhs.a)?.add(&self.b.mul(&rhs.c)?)?,
            b: self.a.mul(&rhs.b)?.add(&self.b.mul(&rhs.d)?)?,
            c: self.c.mul(&rhs.a)?.add(&self.d.mul(&rhs.c)?)?,
            d: self.c.mul(&rhs.b)?.add(&self.d.mul(&rhs.d)?)?,
        })
    }

    pub fn eq_mod(&self, rhs: &Self, m_exp: u32) -> bool {
        self.a.eq_mod(&rhs.a, m_exp)
            && self.b.eq_mod(&rhs.b, m_exp)
            && self.c.eq_mod(&rhs.c, m_exp)
            && self.d.eq_mod(&rhs.d, m_exp)
    }
}

/// `p^{−e}·u_1^{deg}` as a series, zero when the degree overflows `wmax`.
fn scaled_monomial(
    params: &Arc<WittParams>,
    wmax: usize,
    budget: u32,
    deg: Option<u64>,
    denom_exp: u32,
) -> ScaledSeries {
    match deg {
        Some(d) if (d as usize) < wmax => ScaledSeries::monomial(
            params,
            wmax,
            budget,
            d as usize,
            ScaledWitt::new(WittElem::one(params), denom_exp),
        ),
        _ => ScaledSeries::zero(params, wmax, budget),
    }
}

/// The denominator of the Cartier coordinate: `f = Σ_{I∈Λ^even} u_1^{QI}/π^{|I|/2}`.
pub fn f_series(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Result<ScaledSeries> {
    lambda_q_series(params, wmax, budget, LenParity::Even)
}

/// The numerator of the Cartier coordinate: `f_1 = Σ_{I∈Λ^odd} u_1^{QI}/π^{(|I|−1)/2}`.
pub fn f1_series(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Result<ScaledSeries> {
    lambda_q_series(params, wmax, budget, LenParity::Odd)
}

fn lambda_q_series(
    params: &Arc<WittParams>,
    wmax: usize,
    budget: u32,
    parity: LenParity,
) -> Result<ScaledSeries> {
    let q = params.q();
    let one = WittElem::one(params);
    let mut values = Vec::with_capacity(wmax);
    for n in 0..wmax as u64 {
        let mut acc = ScaledWitt::zero(params);
        for seq in enumerate_lambda(q, n, parity) {
            let e = match parity {
                LenParity::Even => seq.len() as u32 / 2,
                LenParity::Odd => (seq.len() as u32 - 1) / 2,
                LenParity::All => unreachable!(),
            };
            acc = acc.add(&ScaledWitt::new(one.clone(), e));
        }
        values.push(acc);
    }
    ScaledSeries::from_scaled_coeffs(params, wmax, budget, values)
}

/// The log-coefficient sequences: `m_0 = 1`, `m_1 = u_1/π`,
/// `m_n = (u_1^{q^{n−1}}/π)·m_{n−1} + (1/π)·m_{n−2}`, together with the
/// π-normalized variants `M_{2n} = π^n m_{2n}`, `M_{2n+1} = π^{n+1} m_{2n+1}`.
#[derive(Debug)]
pub struct MSequence {
    pub m: Vec<ScaledSeries>,
    pub normalized: Vec<ScaledSeries>,
}

pub fn m_sequence(
    params: &Arc<WittParams>,
    count: usize,
    wmax: usize,
    budget: u32,
) -> Result<MSequence> {
    assert!(count >= 2, "need at least m_0, m_1");
    let q = params.q();
    let mut m: Vec<ScaledSeries> = Vec::with_capacity(count);
    m.push(ScaledSeries::one(params, wmax, budget));
    m.push(ScaledSeries::monomial(
        params,
        wmax,
        budget,
        1,
        ScaledWitt::new(WittElem::one(params), 1),
    ));
    for n in 2..count {
        let lead = scaled_monomial(params, wmax, budget, q.checked_pow((n - 1) as u32), 1);
        let a = lead.mul(&m[n - 1])?;
        let b = m[n - 2].scale(&ScaledWitt::new(WittElem::one(params), 1))?;
        m.push(a.add(&b)?);
    }
    // M_{2k} = π^k m_{2k}, M_{2k+1} = π^{k+1} m_{2k+1}
    let mut normalized = Vec::with_capacity(count);
    for (n, mn) in m.iter().enumerate() {
        let k = (n / 2 + n % 2) as u32;
        normalized.push(mn.scale_witt(&WittElem::one(params).mul_pow_p(k)));
    }
    Ok(MSequence { m, normalized })
}

/// The i-th coordinate-change matrix
/// `[[1 + u^{q^{2i}+q^{2i−1}}/π, u^{q^{2i}}], [u^{q^{2i−1}}/π, 1]]`.
fn transfer_matrix(params: &Arc<WittParams>, wmax: usize, budget: u32, i: u32) -> Series2x2 {
    let q = params.q();
    let lo = q.checked_pow(2 * i - 1);
    let hi = q.checked_pow(2 * i);
    let both = match (lo, hi) {
        (Some(a), Some(b)) => a.checked_add(b),
        _ => None,
    };
    let one = ScaledSeries::one(params, wmax, budget);
    let a = one
        .add(&scaled_monomial(params, wmax, budget, both, 1))
        .expect("budget 1");
    Series2x2 {
        a,
        b: scaled_monomial(params, wmax, budget, hi, 0),
        c: scaled_monomial(params, wmax, budget, lo, 1),
        d: one,
    }
}

/// The partial product `T_n ··· T_1`.
pub fn matrix_partial_product(
    params: &Arc<WittParams>,
    n: u32,
    wmax: usize,
    budget: u32,
) -> Result<Series2x2> {
    assert!(n >= 1);
    let mut acc = transfer_matrix(params, wmax, budget, 1);
    for i in 2..=n {
        acc = transfer_matrix(params, wmax, budget, i).mul(&acc)?;
    }
    Ok(acc)
}

/// Run the matrix recursion to stabilization mod `u_1^wmax` and return
/// `(f, f_1)` as the limits of `c·u_1 + d` and `a·u_1 + b`.
pub fn stabilized_f_f1(
    params: &Arc<WittParams>,
    wmax: usize,
    budget: u32,
) -> Result<(ScaledSeries, ScaledSeries)> {
    let mut acc = transfer_matrix(params, wmax, budget, 1);
    let mut i = 2u32;
    loop {
        let t = transfer_matrix(params, wmax, budget, i);
        let next = t.mul(&acc)?;
        // Once two successive partial products agree the tail matrices are
        // the identity mod u^wmax and every later product is unchanged.
        if next.eq_mod(&acc, params.n_exp()) {
            break;
        }
        acc = next;
        i += 1;
        if params.q().checked_pow(2 * i).is_none() {
            break;
        }
    }
    let u = ScaledSeries::u1(params, wmax, budget);
    let f1 = acc.a.mul(&u)?.add(&acc.b)?;
    let f = acc.c.mul(&u)?.add(&acc.d)?;
    Ok((f, f1))
}

/// The Cartier coordinate `w_1 = f_1 / f` as a truncated series.
pub fn w1_series(params: &Arc<WittParams>, wmax: usize, budget: u32) -> Result<ScaledSeries> {
    let f = f_series(params, wmax, budget)?;
    let f1 = f1_series(params, wmax, budget)?;
    f1.mul(&f.invert_unit()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u64, f: u32, n: u32) -> Arc<WittParams> {
        WittParams::new(p, f, n).unwrap()
    }

    fn coeff_eq_one_over_pi(s: &ScaledSeries, n: usize, e: u32) -> bool {
        s.coeff(n)
            .eq_mod(&ScaledWitt::new(WittElem::one(s.params()), e), 8)
    }

    #[test]
    fn ring_op_examples() {
        let pr = setup(3, 1, 12);
        let w = 10;
        let s = ScaledSeries::one(&pr, w, 10)
            .add(&ScaledSeries::u1(&pr, w, 10))
            .unwrap();
        assert_eq!(s.add(&ScaledSeries::zero(&pr, w, 10)).unwrap(), s);
        assert_eq!(s.mul(&ScaledSeries::one(&pr, w, 10)).unwrap(), s);
        let u = ScaledSeries::u1(&pr, w, 10);
        let u2 = u.mul(&u).unwrap();
        assert!(u2
            .coeff(2)
            .eq_mod(&ScaledWitt::from_witt(WittElem::one(&pr)), 12));
        assert!(u2.coeff(1).is_zero());
    }

    #[test]
    fn compose_examples() {
        let pr = setup(3, 1, 12);
        let w = 8;
        let b = 8;
        let u = ScaledSeries::u1(&pr, w, b);
        let s = ScaledSeries::one(&pr, w, b)
            .add(&u)
            .unwrap()
            .mul(&u)
            .unwrap(); // u + u^2
        assert_eq!(ScaledSeries::compose(&s, &u).unwrap(), s);
        assert_eq!(ScaledSeries::compose(&u, &s).unwrap(), s);
        // (u^2) ∘ (u + u^2) = u^2 + 2u^3 + u^4
        let u2 = u.mul(&u).unwrap();
        let comp = ScaledSeries::compose(&u2, &s).unwrap();
        let expect = ScaledSeries::from_integral_coeffs(
            &pr,
            w,
            b,
            vec![
                WittElem::zero(&pr),
                WittElem::zero(&pr),
                WittElem::one(&pr),
                WittElem::from_u64(&pr, 2),
                WittElem::one(&pr),
            ],
        );
        assert_eq!(comp, expect);
        // nonzero constant term rejected
        let bad = ScaledSeries::one(&pr, w, b);
        assert!(matches!(
            ScaledSeries::compose(&u2, &bad),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn invert_examples() {
        let pr = setup(3, 1, 16);
        let w = 12;
        let one = ScaledSeries::one(&pr, w, 12);
        assert_eq!(one.invert_unit().unwrap(), one);
        let s = one.add(&ScaledSeries::u1(&pr, w, 12)).unwrap();
        assert_eq!(s.invert_unit().unwrap().mul(&s).unwrap(), one);
        let f = f_series(&pr, w, 12).unwrap();
        assert!(f.invert_unit().is_ok());
        let u = ScaledSeries::u1(&pr, w, 12);
        assert!(matches!(u.invert_unit(), Err(Error::NonUnitConstantTerm)));
    }

    #[test]
    fn f_leading_terms() {
        for (p, f) in [(2u64, 1u32), (3, 1), (5, 1)] {
            let pr = setup(p, f, 20);
            let q = pr.q();
            let w = (q * q * q * q + q * q * q + q * q + q + 2) as usize;
            let fs = f_series(&pr, w, w as u32).unwrap();
            // constant term 1 (empty sequence)
            assert!(coeff_eq_one_over_pi(&fs, 0, 0));
            assert!(coeff_eq_one_over_pi(&fs, (1 + q) as usize, 1));
            assert!(coeff_eq_one_over_pi(&fs, (1 + q * q * q) as usize, 1));
            assert!(coeff_eq_one_over_pi(&fs, (q * q + q * q * q) as usize, 1));
            assert!(coeff_eq_one_over_pi(
                &fs,
                (1 + q + q * q + q * q * q) as usize,
                2
            ));
            let f1 = f1_series(&pr, w, w as u32).unwrap();
            assert!(coeff_eq_one_over_pi(&f1, 1, 0));
            assert!(coeff_eq_one_over_pi(&f1, (q * q) as usize, 0));
            assert!(coeff_eq_one_over_pi(&f1, (1 + q + q * q) as usize, 1));
            assert!(f1.coeff(0).is_zero());
        }
    }

    #[test]
    fn m_sequence_examples() {
        let pr = setup(2, 1, 24);
        let q = pr.q();
        let w = (q * q * q) as usize; // check convergence below q^3
        let seq = m_sequence(&pr, 6, w, w as u32).unwrap();
        assert_eq!(seq.m[0], ScaledSeries::one(&pr, w, w as u32));
        assert!(seq.m[1]
            .coeff(1)
            .eq_mod(&ScaledWitt::new(WittElem::one(&pr), 1), 20));
        // π^2 m_4 = M_4 matches f below degree q^3
        let f = f_series(&pr, w, w as u32).unwrap();
        assert!(seq.normalized[4].eq_mod(&f, 16));
        // normalization relation M_n = π^{⌈n/2⌉} m_n
        for n in 0..6 {
            let k = (n / 2 + n % 2) as u32;
            let lhs = seq.m[n].scale_witt(&WittElem::one(&pr).mul_pow_p(k));
            assert!(lhs.eq_mod(&seq.normalized[n], 16));
        }
    }

    #[test]
    fn matrix_product_examples() {
        let pr = setup(3, 1, 20);
        let q = pr.q();
        let w = 30usize;
        let b = w as u32;
        let p1 = matrix_partial_product(&pr, 1, w, b).unwrap();
        // n = 1 is the first transfer matrix itself
        assert!(coeff_eq_one_over_pi(&p1.a, 0, 0));
        assert!(coeff_eq_one_over_pi(&p1.a, (q * q + q) as usize, 1));
        assert!(coeff_eq_one_over_pi(&p1.b, (q * q) as usize, 0));
        assert!(coeff_eq_one_over_pi(&p1.c, q as usize, 1));
        assert!(coeff_eq_one_over_pi(&p1.d, 0, 0));
        for n in 1..=3 {
            let pn = matrix_partial_product(&pr, n, w, b).unwrap();
            assert!(coeff_eq_one_over_pi(&pn.d, 0, 0), "d_n constant term 1");
            assert!(pn
                .a
                .coeff(0)
                .eq_mod(&ScaledWitt::from_witt(WittElem::one(&pr)), 16));
        }
    }

    #[test]
    fn stabilized_matrix_matches_closed_forms() {
        for (p, f) in [(2u64, 1u32), (3, 1)] {
            let pr = setup(p, f, 30);
            let w = 40usize;
            let b = w as u32;
            let (fm, f1m) = stabilized_f_f1(&pr, w, b).unwrap();
            let fc = f_series(&pr, w, b).unwrap();
            let f1c = f1_series(&pr, w, b).unwrap();
            assert!(fm.eq_mod(&fc, 20), "f closed vs matrix, p={p}");
            assert!(f1m.eq_mod(&f1c, 20), "f1 closed vs matrix, p={p}");
        }
    }

    #[test]
    fn w1_examples() {
        let pr = setup(2, 1, 40);
        let w = 32usize;
        let b = w as u32;
        let w1 = w1_series(&pr, w, b).unwrap();
        // leading term u_1
        assert!(w1
            .coeff(1)
            .eq_mod(&ScaledWitt::from_witt(WittElem::one(&pr)), 30));
        assert!(w1.coeff(0).is_zero());
        // w1 = lim M_{2n+1}/M_{2n} degreewise
        let seq = m_sequence(&pr, 14, w, b).unwrap();
        let fn_last = seq.normalized[13]
            .mul(&seq.normalized[12].invert_unit().unwrap())
            .unwrap();
        assert!(w1.eq_mod(&fn_last, 24));
    }

    #[test]
    fn budget_guard_trips() {
        let pr = setup(2, 1, 10);
        // m_9 carries denominator exponent 5 > budget 3
        let err = m_sequence(&pr, 10, 8, 3).unwrap_err();
        assert!(matches!(err, Error::PrecisionBudget { .. }));
    }

    #[test]
    fn f_denominator_exponent_bound() {
        // every coefficient of f, f1 below wmax carries a denominator
        // exponent at most log_q(wmax) + 1
        for (p, f) in [(2u64, 1u32), (3, 1), (5, 1)] {
            let pr = setup(p, f, 30);
            let q = pr.q();
            for wmax in [16usize, 64, 150] {
                let bound = (wmax as f64).log(q as f64).floor() as u32 + 1;
                let fs = f_series(&pr, wmax, wmax as u32).unwrap();
                let f1s = f1_series(&pr, wmax, wmax as u32).unwrap();
                assert!(fs.high_water() <= bound, "f at q={q} wmax={wmax}");
                assert!(f1s.high_water() <= bound, "f1 at q={q} wmax={wmax}");
                for n in 0..wmax {
                    assert!(fs.coeff(n).normalize().denom_exp() <= bound);
                    assert!(f1s.coeff(n).normalize().denom_exp() <= bound);
                }
            }
        }
    }

    #[test]
    fn records_roundtrip() {
        let pr = setup(3, 1, 18);
        let w = 12usize;
        let f1 = f1_series(&pr, w, w as u32).unwrap();
        let recs = f1.to_records(10);
        let back = ScaledSeries::from_records(&pr, w, w as u32, &recs).unwrap();
        assert!(back.eq_mod(&f1, 10));
        assert_eq!(back.to_records(10), recs);
    }
}
