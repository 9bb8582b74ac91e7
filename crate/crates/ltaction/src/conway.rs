//! Deterministic modulus selection over `F_p`.
//!
//! The Witt ring `W(F_{q^2})` is represented as `(Z/p^N)[z]/(modulus)` and the
//! modulus must reduce mod p to a fixed irreducible polynomial whose root
//! generates `F_{q^2}^×`, so that formatted output is bit-reproducible. For
//! `p ≤ 7` and degree ≤ 4 we use the Conway polynomial, computed on demand:
//! the minimal primitive polynomial under the Conway word ordering that is
//! norm-compatible with the Conway polynomials of all proper subfields.
//! Outside that range we fall back to the lexicographically smallest
//! primitive polynomial, which satisfies the same generator invariant.

/// A monic polynomial over `F_p`, stored as coefficients of `x^0..x^{deg}`
/// with the leading coefficient 1 included.
type Poly = Vec<u64>;

fn poly_trim(a: &mut Poly) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul_mod(a: &Poly, b: &Poly, modulus: &Poly, p: u64) -> Poly {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod
}

/// Reduce `a` in place modulo the monic polynomial `m`.
fn poly_rem(a: &mut Poly, m: &Poly, p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                a[idx] = (a[idx] + (p - (lead * mk) % p)) % p;
            }
        }
        a.pop();
        poly_trim(a);
        if a.len() <= dm {
            break;
        }
    }
    if a.is_empty() {
        a.push(0);
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &Poly, mut e: u128, modulus: &Poly, p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = base.clone();
    poly_rem(&mut b, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn poly_is_one(a: &Poly) -> bool {
    a.len() == 1 && a[0] == 1
}

fn poly_gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // Make b monic so poly_rem applies.
        let lead = *b.last().unwrap();
        let inv = mod_inv(lead, p);
        let monic: Poly = b.iter().map(|&c| c * inv % p).collect();
        poly_rem(&mut a, &monic, p);
        std::mem::swap(&mut a, &mut b);
        poly_trim(&mut b);
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime and a != 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % mm;
        }
        base = base * base % mm;
        e >>= 1;
    }
    acc as u64
}

/// `x^{p^k} mod f`, computed by k-fold Frobenius exponentiation.
fn x_pow_p_pow(k: u32, f: &Poly, p: u64) -> Poly {
    let mut acc: Poly = vec![0, 1];
    for _ in 0..k {
        acc = poly_pow_mod(&acc, p as u128, f, p);
    }
    acc
}

/// Irreducibility over `F_p` by the standard Frobenius criterion.
fn is_irreducible(f: &Poly, p: u64) -> bool {
    let n = (f.len() - 1) as u32;
    if n == 0 {
        return false;
    }
    // x^{p^n} ≡ x mod f
    let xpn = x_pow_p_pow(n, f, p);
    let x: Poly = vec![0, 1];
    if xpn != x {
        return false;
    }
    // gcd(x^{p^{n/ℓ}} − x, f) = 1 for every prime ℓ | n
    for l in prime_factors(n as u64) {
        let sub = x_pow_p_pow(n / l as u32, f, p);
        let mut diff = sub.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(diff, f.clone(), p);
        if !(g.len() == 1 && g[0] != 0) {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Does the root of the irreducible `f` generate `F_{p^n}^×`?
fn is_primitive(f: &Poly, p: u64) -> bool {
    if f[0] == 0 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    let order = p.pow(n) - 1;
    let x: Poly = vec![0, 1];
    for l in prime_factors(order) {
        if poly_is_one(&poly_pow_mod(&x, (order / l) as u128, f, p)) {
            return false;
        }
    }
    true
}

/// Check `C_d(x^{(p^n−1)/(p^d−1)}) ≡ 0 mod (f, p)` for the candidate `f`.
fn norm_compatible(f: &Poly, p: u64, d: u32, c_d: &Poly) -> bool {
    let n = (f.len() - 1) as u32;
    let e = ((p.pow(n) as u128) - 1) / ((p.pow(d) as u128) - 1);
    let x: Poly = vec![0, 1];
    let r = poly_pow_mod(&x, e, f, p);
    // Evaluate c_d at r.
    let mut acc: Poly = vec![0];
    for &coef in c_d.iter().rev() {
        acc = poly_mul_mod(&acc, &r, f, p);
        if acc.is_empty() {
            acc = vec![0];
        }
        acc[0] = (acc[0] + coef) % p;
        poly_trim(&mut acc);
    }
    acc.len() == 1 && acc[0] == 0
}

/// Smallest primitive root mod p.
fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'outer: for g in 2..p {
        for &l in &factors {
            if mod_pow(g, (p - 1) / l, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// The Conway polynomial for `F_{p^n}`, computed by ordered search.
///
/// Candidates `x^n + a_{n−1}x^{n−1} + … + a_0` are scanned in increasing
/// Conway word order, where the word is `b_i = (−1)^{n−i} a_i mod p` read
/// from `b_{n−1}` down to `b_0`; the first primitive polynomial compatible
/// with the Conway polynomials of all proper subfields wins.
pub(crate) fn conway_polynomial(p: u64, n: u32) -> Poly {
    if n == 1 {
        let g = smallest_primitive_root(p);
        return vec![(p - g % p) % p, 1];
    }
    let sub: Vec<(u32, Poly)> = (1..n)
        .filter(|d| n % d == 0)
        .map(|d| (d, conway_polynomial(p, d)))
        .collect();
    let total = (p as u128).pow(n);
    let mut word = vec![0u64; n as usize]; // word[0] = b_{n−1}, …, word[n−1] = b_0
    for _ in 0..total {
        let mut f: Poly = vec![0; n as usize + 1];
        f[n as usize] = 1;
        for (idx, &b) in word.iter().enumerate() {
            let i = n as usize - 1 - idx; // coefficient index of x^i
            let sign_neg = (n as usize - i) % 2 == 1;
            f[i] = if sign_neg { (p - b) % p } else { b };
        }
        if is_irreducible(&f, p)
            && is_primitive(&f, p)
            && sub.iter().all(|(d, c)| norm_compatible(&f, p, *d, c))
        {
            return f;
        }
        // Increment the word lexicographically from the last position.
        for pos in (0..word.len()).rev() {
            word[pos] += 1;
            if word[pos] < p {
                break;
            }
            word[pos] = 0;
        }
    }
    unreachable!("a Conway polynomial exists for every (p, n)")
}

/// Lexicographically smallest primitive polynomial of degree `n` over `F_p`,
/// ordered by the plain coefficient tuple `(a_{n−1}, …, a_0)`.
pub(crate) fn smallest_primitive(p: u64, n: u32) -> Poly {
    let total = (p as u128).pow(n);
    for code in 0..total {
        let mut f: Poly = vec![0; n as usize + 1];
        f[n as usize] = 1;
        let mut c = code;
        for i in (0..n as usize).rev() {
            f[i] = (c % p as u128) as u64;
            c /= p as u128;
        }
        if is_irreducible(&f, p) && is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist for every (p, n)")
}

/// Deterministic residue modulus for `W(F_{p^{2f}})`: Conway when tabulated
/// small, lexicographically smallest primitive otherwise.
pub(crate) fn residue_modulus(p: u64, degree: u32) -> Poly {
    if p <= 7 && degree <= 4 {
        conway_polynomial(p, degree)
    } else {
        smallest_primitive(p, degree)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &small in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_pow(x, 2, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_conway_values() {
        // Hand-checked against the standard tables.
        assert_eq!(conway_polynomial(2, 2), vec![1, 1, 1]);
        assert_eq!(conway_polynomial(3, 2), vec![2, 2, 1]);
        assert_eq!(conway_polynomial(5, 2), vec![2, 4, 1]);
        assert_eq!(conway_polynomial(7, 2), vec![3, 6, 1]);
    }

    #[test]
    fn degree_four_conway_invariants() {
        for p in [2u64, 3] {
            let f = conway_polynomial(p, 4);
            assert!(is_irreducible(&f, p));
            assert!(is_primitive(&f, p));
            let c2 = conway_polynomial(p, 2);
            let c1 = conway_polynomial(p, 1);
            assert!(norm_compatible(&f, p, 2, &c2));
            assert!(norm_compatible(&f, p, 1, &c1));
        }
        assert_eq!(conway_polynomial(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn fallback_is_primitive() {
        let f = smallest_primitive(11, 2);
        assert!(is_irreducible(&f, 11));
        assert!(is_primitive(&f, 11));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(is_prime(7919));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(7917));
    }
}
