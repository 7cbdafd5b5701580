//! Multivariate polynomial gcd over ℚ.
//!
//! Recursive primitive PRS over one main variable at a time. Before the
//! PRS runs, every shared variable is probed with a modular univariate gcd
//! at a random specialization: a degree-zero answer (with leading
//! coefficients surviving the specialization) proves the true gcd is free
//! of that variable, which usually settles the question cheaply.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::LaurentPoly;

const PRIME: u64 = (1 << 61) - 1;

/// Gcd of two true polynomials, normalized to integer coefficients with
/// content 1 and a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    debug_assert!(a.is_polynomial() && b.is_polynomial());
    if a.is_zero() {
        return b.primitive().1;
    }
    if b.is_zero() {
        return a.primitive().1;
    }
    let (ma, mb) = (a.min_exponents(), b.min_exponents());
    let common: Vec<i64> = ma.iter().zip(&mb).map(|(x, y)| (*x).min(*y)).collect();
    let a0 = a.mul_monomial(&neg(&ma)).primitive().1;
    let b0 = b.mul_monomial(&neg(&mb)).primitive().1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_6cd);
    let g = gcd_free(&a0, &b0, &mut rng);
    g.mul_monomial(&common).primitive().1
}

fn neg(e: &[i64]) -> Vec<i64> {
    e.iter().map(|k| -k).collect()
}

/// Gcd of primitive polynomials with no monomial content.
fn gcd_free(a: &LaurentPoly, b: &LaurentPoly, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one(n);
    }
    if a == b {
        return a.clone();
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if large.exact_div(small).is_some() {
        return small.clone();
    }
    let va = a.support_vars();
    let vb = b.support_vars();
    // A variable present in only one argument cannot occur in the gcd.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return content_gcd(a, v, b.clone(), rng);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return content_gcd(b, v, a.clone(), rng);
    }
    let point: Vec<u64> = (0..n).map(|_| rng.random_range(2..PRIME)).collect();
    let mut best: Option<(usize, usize)> = None;
    for &v in &va {
        let Some(d) = modular_gcd_degree(a, b, v, &point) else {
            continue;
        };
        if d == 0 {
            let g = content_gcd(a, v, LaurentPoly::zero(n), rng);
            return content_gcd(b, v, g, rng);
        }
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((v, d));
        }
    }
    let v = best.map(|(v, _)| v).unwrap_or(va[0]);
    prs_gcd(a, b, v, rng)
}

/// Folds `acc` with every coefficient of `p` in `x_{v+1}`, stopping once the
/// running gcd is constant.
fn content_gcd(p: &LaurentPoly, v: usize, mut acc: LaurentPoly, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let n = p.nvars();
    let mut coeffs: Vec<LaurentPoly> = p.coefficients_in(v).into_values().collect();
    coeffs.sort_by_key(LaurentPoly::len);
    for c in coeffs {
        if !acc.is_zero() && acc.is_constant() {
            return LaurentPoly::one(n);
        }
        acc = gcd_normalized(&acc, &c, rng);
    }
    acc
}

fn gcd_normalized(a: &LaurentPoly, b: &LaurentPoly, rng: &mut ChaCha8Rng) -> LaurentPoly {
    if a.is_zero() {
        return b.primitive().1;
    }
    if b.is_zero() {
        return a.primitive().1;
    }
    let (ma, mb) = (a.min_exponents(), b.min_exponents());
    let common: Vec<i64> = ma.iter().zip(&mb).map(|(x, y)| (*x).min(*y)).collect();
    let a0 = a.mul_monomial(&neg(&ma)).primitive().1;
    let b0 = b.mul_monomial(&neg(&mb)).primitive().1;
    gcd_free(&a0, &b0, rng).mul_monomial(&common).primitive().1
}

fn content_in(p: &LaurentPoly, v: usize, rng: &mut ChaCha8Rng) -> LaurentPoly {
    content_gcd(p, v, LaurentPoly::zero(p.nvars()), rng)
}

fn primitive_part_in(p: &LaurentPoly, v: usize, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let c = content_in(p, v, rng);
    p.exact_div(&c).expect("content divides").primitive().1
}

/// Lazy pseudo-remainder of `a` by `b` in `x_{v+1}`.
fn pseudo_remainder(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let db = b.degree_in(v);
    let lc_b = b.coefficient_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lc_r = r.coefficient_in(v, dr);
        let mut shift = vec![0; a.nvars()];
        shift[v] = dr - db;
        r = &(&lc_b * &r) - &(&lc_r * &b.mul_monomial(&shift));
        r = r.primitive().1;
    }
    r
}

fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly, v: usize, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let ca = content_in(a, v, rng);
    let cb = content_in(b, v, rng);
    let c = gcd_normalized(&ca, &cb, rng);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break LaurentPoly::one(a.nvars());
        }
        p = q;
        q = primitive_part_in(&r, v, rng);
    };
    (&c * &primitive_part_in(&g, v, rng)).primitive().1
}

fn residue(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(PRIME)).to_u64().expect("reduced below the modulus")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

/// Dense coefficients (low degree first) of `p` in `x_{v+1}` after
/// specializing the other variables to `point` modulo the prime.
fn specialize(p: &LaurentPoly, v: usize, point: &[u64]) -> Vec<u64> {
    let deg = p.degree_in(v) as usize;
    let mut out = vec![0u64; deg + 1];
    for (e, c) in p.terms() {
        debug_assert!(c.is_integer());
        let mut t = residue(c.numer());
        for (w, &k) in e.iter().enumerate() {
            if w != v && k != 0 {
                t = mul_mod(t, pow_mod(point[w], k as u64));
            }
        }
        let slot = &mut out[e[v] as usize];
        *slot = (*slot + t) % PRIME;
    }
    out
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the univariate gcd modulo the prime, or `None` when a leading
/// coefficient vanishes at the specialization (the probe says nothing then).
fn modular_gcd_degree(a: &LaurentPoly, b: &LaurentPoly, v: usize, point: &[u64]) -> Option<usize> {
    let mut p = specialize(a, v, point);
    let mut q = specialize(b, v, point);
    if p.last() == Some(&0) || q.last() == Some(&0) {
        return None;
    }
    while !q.is_empty() {
        if p.len() < q.len() {
            std::mem::swap(&mut p, &mut q);
            continue;
        }
        let inv = inv_mod(*q.last().unwrap());
        while p.len() >= q.len() && !p.is_empty() {
            let f = mul_mod(*p.last().unwrap(), inv);
            let off = p.len() - q.len();
            for (i, &c) in q.iter().enumerate() {
                p[off + i] = (p[off + i] + PRIME - mul_mod(f, c)) % PRIME;
            }
            trim(&mut p);
        }
        std::mem::swap(&mut p, &mut q);
    }
    debug_assert!(!p.is_empty());
    Some(p.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(2, 0), x(2, 1));
        let p = &(&a * &a) - &(&b * &b);
        let q = &a - &b;
        assert_eq!(gcd(&p, &q), q);
    }

    #[test]
    fn coprime_and_monomial_content() {
        let n = 3;
        let p = &(&x(n, 0) * &x(n, 1)) + &LaurentPoly::one(n);
        let q = &(&x(n, 1) * &x(n, 2)) + &x(n, 0);
        assert!(gcd(&p, &q).is_one());
        let m = x(n, 1).pow(2);
        assert_eq!(gcd(&(&p * &m), &(&q * &x(n, 1))), x(n, 1));
    }

    #[test]
    fn hidden_common_factor() {
        let n = 3;
        let f = &(&(&x(n, 0) * &x(n, 2)) + &x(n, 1).pow(2)) + &LaurentPoly::one(n);
        let g = &x(n, 0) + &x(n, 1);
        let h = &(&x(n, 2).pow(2) * &x(n, 1)) - &LaurentPoly::from_int(n, 3);
        let a = &f * &g;
        let b = &(&f * &h).scale(&num_rational::BigRational::from_integer(6.into())) * &x(n, 2);
        assert_eq!(gcd(&a, &b), f.primitive().1);
    }
}
