//! Finite-precision arithmetic in the Witt ring `W(F_{q^2})`, `q = p^f`.
//!
//! Elements are represented as polynomials in a Teichmüller generator `z`
//! over `Z/p^N`: the modulus is the degree-2f minimal polynomial of the
//! Teichmüller lift of a generator of `F_{q^2}^×`, obtained by Hensel-lifting
//! a fixed residue polynomial (Conway where tabulated). With that choice the
//! generator satisfies `z^{q^2−1} = 1` exactly mod `p^N`, the Frobenius lift
//! `σ` is the substitution `z ↦ z^q`, and `σ^2 = id` holds on the nose.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::conway;
use crate::error::Error;
use crate::Result;

/// Plain residue ring `(Z/p^N)[z]/(modulus)` with precomputed reduction rows.
#[derive(Debug)]
struct Ring {
    p_pow: BigUint,
    deg: usize,
    /// `reduction[j]` holds the coordinates of `z^{deg+j}`.
    reduction: Vec<Vec<BigUint>>,
}

impl Ring {
    fn new(p_pow: BigUint, modulus: &[BigUint]) -> Self {
        let deg = modulus.len();
        let mut reduction: Vec<Vec<BigUint>> = Vec::with_capacity(deg.max(1) - 1);
        // z^deg = −(m_0 + m_1 z + … + m_{deg−1} z^{deg−1})
        let base: Vec<BigUint> = modulus
            .iter()
            .map(|m| (&p_pow - m % &p_pow) % &p_pow)
            .collect();
        reduction.push(base);
        for j in 1..deg.max(1) - 1 {
            let prev = reduction[j - 1].clone();
            // multiply by z: shift, then fold the top coordinate back in
            let top = prev[deg - 1].clone();
            let mut next = vec![BigUint::zero(); deg];
            next[1..deg].clone_from_slice(&prev[..deg - 1]);
            for k in 0..deg {
                next[k] = (&next[k] + &top * &reduction[0][k]) % &p_pow;
            }
            reduction.push(next);
        }
        Ring {
            p_pow,
            deg,
            reduction,
        }
    }

    fn zero(&self) -> Vec<BigUint> {
        vec![BigUint::zero(); self.deg]
    }

    fn add(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y) % &self.p_pow)
            .collect()
    }

    fn neg(&self, a: &[BigUint]) -> Vec<BigUint> {
        a.iter().map(|x| (&self.p_pow - x) % &self.p_pow).collect()
    }

    fn sub(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + &self.p_pow - y) % &self.p_pow)
            .collect()
    }

    fn mul(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        let deg = self.deg;
        let mut wide = vec![BigUint::zero(); 2 * deg - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                wide[i + j] += ai * bj;
            }
        }
        let mut out: Vec<BigUint> = wide[..deg].iter().map(|x| x % &self.p_pow).collect();
        for j in 0..deg - 1 {
            let c = &wide[deg + j] % &self.p_pow;
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reduction[j]) {
                *o = (&*o + &c * r) % &self.p_pow;
            }
        }
        out
    }

    fn scalar_mul(&self, a: &[BigUint], s: &BigUint) -> Vec<BigUint> {
        a.iter().map(|x| x * s % &self.p_pow).collect()
    }

    fn pow(&self, a: &[BigUint], mut e: u64) -> Vec<BigUint> {
        let mut acc = self.zero();
        acc[0] = BigUint::one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Parameters of a fixed-precision Witt ring `W(F_{q^2}) / p^N`.
///
/// Immutable after construction; share via [`Arc`].
pub struct WittParams {
    p: u64,
    f: u32,
    n_exp: u32,
    q: u64,
    ring: Ring,
    modulus: Vec<BigUint>,
    /// `frob[i]` holds the coordinates of `σ(z^i) = z^{q·i}`.
    frob: Vec<Vec<BigUint>>,
}

impl fmt::Debug for WittParams {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "WittParams(p={}, f={}, N={}, q={})",
            self.p, self.f, self.n_exp, self.q
        )
    }
}

impl PartialEq for WittParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.n_exp == other.n_exp
    }
}
impl Eq for WittParams {}

impl WittParams {
    /// Build the ring `W(F_{p^{2f}})` at absolute precision `p^N`.
    ///
    /// The modulus is deterministic: the fixed residue polynomial is lifted
    /// until its root is the Teichmüller representative, by iterating
    /// `y ↦ y^{q^2}` to its fixed point and taking the minimal polynomial of
    /// the limit.
    pub fn new(p: u64, f: u32, n_exp: u32) -> Result<Arc<WittParams>> {
        if !conway::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n_exp == 0 {
            return Err(Error::ZeroPrecision);
        }
        if f == 0 {
            return Err(Error::ZeroResidueDegree);
        }
        let q = p
            .checked_pow(f)
            .filter(|q| q.checked_mul(*q).is_some())
            .ok_or(Error::ParameterOverflow)?;
        let deg = (2 * f) as usize;
        let p_pow = BigUint::from(p).pow(n_exp);

        let residue = conway::residue_modulus(p, 2 * f);
        let naive: Vec<BigUint> = residue[..deg].iter().map(|&c| BigUint::from(c)).collect();
        let ring0 = Ring::new(p_pow.clone(), &naive);

        // Teichmüller fixed point of z in the naively lifted ring.
        let mut tau = ring0.zero();
        tau[1] = BigUint::one();
        let mut iterations = 0u32;
        loop {
            let next = ring0.pow(&tau, q * q);
            if next == tau {
                break;
            }
            tau = next;
            iterations += 1;
            if iterations > n_exp + 4 {
                return Err(Error::Internal(
                    "Teichmüller iteration failed to converge".into(),
                ));
            }
        }

        // Minimal polynomial of tau: product of (X − tau^{p^j}) over the
        // Galois orbit. Its coefficients must be scalars.
        let mut poly: Vec<Vec<BigUint>> = vec![{
            let mut one = ring0.zero();
            one[0] = BigUint::one();
            one
        }];
        let mut conj = tau.clone();
        for j in 0..deg {
            if j > 0 {
                conj = ring0.pow(&conj, p);
            }
            let neg_c = ring0.neg(&conj);
            let mut next = vec![ring0.zero(); poly.len() + 1];
            for (k, coef) in poly.iter().enumerate() {
                next[k + 1] = ring0.add(&next[k + 1], coef);
                let t = ring0.mul(coef, &neg_c);
                next[k] = ring0.add(&next[k], &t);
            }
            poly = next;
        }
        debug_assert!(poly[deg].iter().skip(1).all(BigUint::is_zero));
        let mut modulus = Vec::with_capacity(deg);
        for coef in poly.iter().take(deg) {
            if coef.iter().skip(1).any(|c| !c.is_zero()) {
                return Err(Error::Internal(
                    "minimal polynomial of the Teichmüller lift is not rational".into(),
                ));
            }
            modulus.push(coef[0].clone());
        }
        // The lift must still reduce to the chosen residue polynomial.
        for (m, &r) in modulus.iter().zip(residue.iter()) {
            if m % p != BigUint::from(r) {
                return Err(Error::Internal("Hensel lift drifted mod p".into()));
            }
        }

        let ring = Ring::new(p_pow, &modulus);
        let mut z = ring.zero();
        z[1] = BigUint::one();
        let zq = ring.pow(&z, q);
        let mut frob = Vec::with_capacity(deg);
        let mut one = ring.zero();
        one[0] = BigUint::one();
        frob.push(one);
        for i in 1..deg {
            let prev = frob[i - 1].clone();
            frob.push(ring.mul(&prev, &zq));
        }

        let params = WittParams {
            p,
            f,
            n_exp,
            q,
            ring,
            modulus,
            frob,
        };
        // Teichmüller property of the generator, exact at full precision.
        let mut pw = params.ring.pow(&z, q * q - 1);
        pw[0] = (&pw[0] + &params.ring.p_pow - BigUint::one()) % &params.ring.p_pow;
        if pw.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("generator is not Teichmüller".into()));
        }
        Ok(Arc::new(params))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    /// Residue field size `q = p^f`.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Absolute precision exponent: elements are known mod `p^N`.
    pub fn n_exp(&self) -> u32 {
        self.n_exp
    }
    pub fn p_pow(&self) -> &BigUint {
        &self.ring.p_pow
    }
    /// Degree of the polynomial representation, `2f`.
    pub fn deg(&self) -> usize {
        self.ring.deg
    }
    /// Coefficients `z^0..z^{2f−1}` of the monic modulus.
    pub fn modulus(&self) -> &[BigUint] {
        &self.modulus
    }
}

fn assert_same_params(a: &WittElem, b: &WittElem) {
    assert!(
        Arc::ptr_eq(&a.params, &b.params) || *a.params == *b.params,
        "WittElem operands use different parameters: {:?} vs {:?}",
        a.params,
        b.params
    );
}

/// An element of `W(F_{q^2})` mod `p^N`: coordinates in the basis
/// `1, z, …, z^{2f−1}`, each reduced into `[0, p^N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct WittElem {
    params: Arc<WittParams>,
    coords: Vec<BigUint>,
}

impl fmt::Debug for WittElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "WittElem({})", format_elem(self))
    }
}

impl WittElem {
    pub fn zero(params: &Arc<WittParams>) -> Self {
        WittElem {
            params: params.clone(),
            coords: params.ring.zero(),
        }
    }

    pub fn one(params: &Arc<WittParams>) -> Self {
        Self::from_u64(params, 1)
    }

    /// The Teichmüller generator `z`.
    pub fn gen(params: &Arc<WittParams>) -> Self {
        let mut coords = params.ring.zero();
        coords[1] = BigUint::one();
        WittElem {
            params: params.clone(),
            coords,
        }
    }

    pub fn from_u64(params: &Arc<WittParams>, v: u64) -> Self {
        let mut coords = params.ring.zero();
        coords[0] = BigUint::from(v) % params.p_pow();
        WittElem {
            params: params.clone(),
            coords,
        }
    }

    pub fn from_bigint(params: &Arc<WittParams>, v: &BigInt) -> Self {
        let m = BigInt::from(params.p_pow().clone());
        let r = ((v % &m) + &m) % &m;
        let mut coords = params.ring.zero();
        coords[0] = r.to_biguint().expect("nonnegative after reduction");
        WittElem {
            params: params.clone(),
            coords,
        }
    }

    pub fn from_i64(params: &Arc<WittParams>, v: i64) -> Self {
        Self::from_bigint(params, &BigInt::from(v))
    }

    /// Build from raw coordinates (reduced mod `p^N`).
    pub fn from_coords(params: &Arc<WittParams>, coords: Vec<BigUint>) -> Self {
        assert_eq!(coords.len(), params.deg(), "coordinate count must be 2f");
        let coords = coords.into_iter().map(|c| c % params.p_pow()).collect();
        WittElem {
            params: params.clone(),
            coords,
        }
    }

    pub fn params(&self) -> &Arc<WittParams> {
        &self.params
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BigUint::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_same_params(self, rhs);
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.add(&self.coords, &rhs.coords),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_same_params(self, rhs);
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.sub(&self.coords, &rhs.coords),
        }
    }

    pub fn neg(&self) -> Self {
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.neg(&self.coords),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_same_params(self, rhs);
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.mul(&self.coords, &rhs.coords),
        }
    }

    pub fn mul_scalar(&self, s: &BigUint) -> Self {
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.scalar_mul(&self.coords, s),
        }
    }

    pub fn mul_u64(&self, s: u64) -> Self {
        self.mul_scalar(&BigUint::from(s))
    }

    pub fn pow(&self, e: u64) -> Self {
        WittElem {
            params: self.params.clone(),
            coords: self.params.ring.pow(&self.coords, e),
        }
    }

    /// Frobenius lift `σ`: the substitution `z ↦ z^q`, identity on `Z/p^N`.
    pub fn frobenius(&self) -> Self {
        let ring = &self.params.ring;
        let mut out = ring.zero();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, f) in out.iter_mut().zip(&self.params.frob[i]) {
                *o = (&*o + c * f) % &ring.p_pow;
            }
        }
        WittElem {
            params: self.params.clone(),
            coords: out,
        }
    }

    /// `N(a) = a·σ(a)`, a σ-fixed element.
    pub fn norm(&self) -> Self {
        self.mul(&self.frobenius())
    }

    /// Largest `e ≤ N` with `p^e` dividing every coordinate; `None` when the
    /// element is 0 mod `p^N` (valuation +∞ at this precision).
    pub fn valuation(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        let p = BigUint::from(self.params.p);
        for c in &self.coords {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut cur = c.clone();
            while v < self.params.n_exp {
                let (div, rem) = cur.div_rem(&p);
                if !rem.is_zero() {
                    break;
                }
                cur = div;
                v += 1;
            }
            best = Some(best.map_or(v, |b| b.min(v)));
            if best == Some(0) {
                return best;
            }
        }
        best
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Multiplicative inverse of a unit, by Newton iteration off the residue
    /// field inverse.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let q2 = self.params.q * self.params.q;
        // Correct mod p by Fermat in the residue field.
        let mut x = self.pow(q2 - 2);
        let two = WittElem::from_u64(&self.params, 2);
        let mut bits = 1u32;
        while bits < self.params.n_exp {
            // x ← x(2 − a·x), doubling the number of correct digits.
            let t = two.sub(&self.mul(&x));
            x = x.mul(&t);
            bits *= 2;
        }
        debug_assert!(self
            .mul(&x)
            .eq_mod(&WittElem::one(&self.params), self.params.n_exp));
        Ok(x)
    }

    /// Divide every coordinate exactly by `p^k`. Panics when not divisible;
    /// callers must check [`valuation`](Self::valuation) first.
    pub fn exact_div_pow(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let d = BigUint::from(self.params.p).pow(k);
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&d);
                assert!(r.is_zero(), "exact_div_pow: coordinate not divisible");
                q
            })
            .collect();
        WittElem {
            params: self.params.clone(),
            coords,
        }
    }

    pub fn mul_pow_p(&self, k: u32) -> Self {
        self.mul_scalar(&BigUint::from(self.params.p).pow(k))
    }

    /// Coordinates reduced mod `p^m` (for output at a coarser precision).
    pub fn coords_mod(&self, m_exp: u32) -> Vec<BigUint> {
        let m = BigUint::from(self.params.p).pow(m_exp.min(self.params.n_exp));
        self.coords.iter().map(|c| c % &m).collect()
    }

    /// Equality mod `p^m`.
    pub fn eq_mod(&self, rhs: &Self, m_exp: u32) -> bool {
        assert_same_params(self, rhs);
        self.coords_mod(m_exp) == rhs.coords_mod(m_exp)
    }

    pub fn is_zero_mod(&self, m_exp: u32) -> bool {
        self.coords_mod(m_exp).iter().all(BigUint::is_zero)
    }

    /// Is the element in the prime subring `Z/p^m` (all higher coordinates 0)?
    pub fn in_prime_subring_mod(&self, m_exp: u32) -> bool {
        self.coords_mod(m_exp).iter().skip(1).all(BigUint::is_zero)
    }
}

/// A Witt value together with an explicit power-of-p denominator:
/// the pair `(num, e)` stands for `num / p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledWitt {
    num: WittElem,
    denom_exp: u32,
}

impl ScaledWitt {
    pub fn new(num: WittElem, denom_exp: u32) -> Self {
        ScaledWitt { num, denom_exp }
    }

    pub fn from_witt(num: WittElem) -> Self {
        ScaledWitt { num, denom_exp: 0 }
    }

    pub fn zero(params: &Arc<WittParams>) -> Self {
        Self::from_witt(WittElem::zero(params))
    }

    pub fn num(&self) -> &WittElem {
        &self.num
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn params(&self) -> &Arc<WittParams> {
        self.num.params()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ScaledWitt {
            num: self.num.mul(&rhs.num),
            denom_exp: self.denom_exp + rhs.denom_exp,
        }
    }

    pub fn mul_witt(&self, rhs: &WittElem) -> Self {
        ScaledWitt {
            num: self.num.mul(rhs),
            denom_exp: self.denom_exp,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let e = self.denom_exp.max(rhs.denom_exp);
        let a = self.num.mul_pow_p(e - self.denom_exp);
        let b = rhs.num.mul_pow_p(e - rhs.denom_exp);
        ScaledWitt {
            num: a.add(&b),
            denom_exp: e,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ScaledWitt {
            num: self.num.neg(),
            denom_exp: self.denom_exp,
        }
    }

    /// Divide by a further `p^k` (bookkeeping only).
    pub fn div_pow_p(&self, k: u32) -> Self {
        ScaledWitt {
            num: self.num.clone(),
            denom_exp: self.denom_exp + k,
        }
    }

    /// Reduce the denominator exponent as far as the numerator's valuation
    /// allows, by exact division of representatives.
    pub fn normalize(&self) -> Self {
        if self.denom_exp == 0 {
            return self.clone();
        }
        let v = self.num.valuation();
        let k = match v {
            None => self.denom_exp, // numerator ≡ 0: value is 0 at this precision
            Some(v) => v.min(self.denom_exp),
        };
        if k == 0 {
            return self.clone();
        }
        ScaledWitt {
            num: if self.num.is_zero() {
                self.num.clone()
            } else {
                self.num.exact_div_pow(k)
            },
            denom_exp: self.denom_exp - k,
        }
    }

    /// Extract an integral Witt element; errors when the value genuinely has
    /// a denominator at this precision.
    pub fn to_integral(&self) -> Result<WittElem> {
        let n = self.normalize();
        if n.denom_exp != 0 {
            return Err(Error::IntegralityViolation { degree: 0 });
        }
        Ok(n.num)
    }

    /// Equality as p-adic values mod `p^m`, via cross-multiplication.
    pub fn eq_mod(&self, rhs: &Self, m_exp: u32) -> bool {
        let a = self.normalize();
        let b = rhs.normalize();
        let e = a.denom_exp.max(b.denom_exp);
        let an = a.num.mul_pow_p(e - a.denom_exp);
        let bn = b.num.mul_pow_p(e - b.denom_exp);
        let check = (m_exp + e).min(a.num.params().n_exp());
        an.eq_mod(&bn, check)
    }
}

// ---------------------------------------------------------------------------
// Element expression grammar.
//
// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := '-' factor | atom ('^' uint)?
// atom   := uint | 'z' | '(' expr ')'
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    params: Arc<WittParams>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<WittElem> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.neg()
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WittElem> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WittElem> {
        if self.peek() == Some(b'-') {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            let e: u64 = e
                .try_into()
                .map_err(|_| Error::Syntax("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WittElem> {
        match self.peek() {
            Some(b'z') => {
                self.bump();
                Ok(WittElem::gen(&self.params))
            }
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(Error::Syntax("expected ')'".into()));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                let mut coords = self.params.ring.zero();
                coords[0] = v % self.params.p_pow();
                Ok(WittElem {
                    params: self.params.clone(),
                    coords,
                })
            }
            Some(c) => Err(Error::Syntax(format!(
                "unexpected character '{}'",
                c as char
            ))),
            None => Err(Error::Syntax("unexpected end of input".into())),
        }
    }

    fn uint(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Syntax("expected an integer".into()));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        s.parse::<BigUint>()
            .map_err(|e| Error::Syntax(e.to_string()))
    }
}

/// Parse an integer-coefficient polynomial expression in the Teichmüller
/// generator `z`, e.g. `"1+2*z"`, `"z^2"`, `"-4-3*z^2"`.
pub fn parse_elem(text: &str, params: &Arc<WittParams>) -> Result<WittElem> {
    let mut parser = Parser {
        text: text.as_bytes(),
        pos: 0,
        params: params.clone(),
    };
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.text.len() {
        return Err(Error::Syntax(format!(
            "trailing input at byte {}",
            parser.pos
        )));
    }
    Ok(out)
}

/// Canonical form `c0 + c1*z + c2*z^2 + …` with coefficients in `[0, p^N)`;
/// zero terms are omitted and the zero element prints as `"0"`.
pub fn format_elem(a: &WittElem) -> String {
    let mut parts = Vec::new();
    for (i, c) in a.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match i {
            0 => parts.push(c.to_string()),
            1 => parts.push(format!("{c}*z")),
            _ => parts.push(format!("{c}*z^{i}")),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Balanced integer representative of a prime-subring element mod `p^m`:
/// the representative `r` with `|r| < p^m / 2`, when one exists.
pub fn balanced_residue(a: &WittElem, m_exp: u32) -> Option<BigInt> {
    if !a.in_prime_subring_mod(m_exp) {
        return None;
    }
    let m = BigUint::from(a.params.p).pow(m_exp);
    let r = &a.coords_mod(m_exp)[0];
    let twice = r << 1;
    let rb = BigInt::from(r.clone());
    let mb = BigInt::from(m.clone());
    if twice < m {
        Some(rb)
    } else if twice > m {
        Some(rb - mb)
    } else {
        None // exactly p^m/2: no representative strictly below p^m/2
    }
}
