//! Sparse multivariate Laurent polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;

pub type Exponent = Vec<i64>;

/// Terms are kept in lexicographic exponent order with `x1` most significant,
/// so the last entry is the lex-leading term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exp: Exponent, c: BigRational) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    /// Componentwise minimum exponent; zeros for the zero polynomial.
    pub fn min_exponents(&self) -> Exponent {
        self.fold_exponents(i64::min)
    }

    pub fn max_exponents(&self) -> Exponent {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: fn(i64, i64) -> i64) -> Exponent {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut acc = first.clone();
        for e in it {
            for (a, &k) in acc.iter_mut().zip(e) {
                *a = f(*a, k);
            }
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|e| e[v] != 0))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.nvars);
        }
        if self.is_monomial() {
            let (e, c) = self.terms.iter().next().unwrap();
            let e = e.iter().map(|&a| a * k as i64).collect();
            return Self::monomial(e, num_traits::pow(c.clone(), k as usize));
        }
        let mut base = self.clone();
        let mut acc: Option<LaurentPoly> = None;
        let mut k = k;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = &base * &base;
        }
        acc.unwrap()
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[v] -= 1;
            out.terms.insert(d, c * BigRational::from_integer(e[v].into()));
        }
        out
    }

    /// Value at a point. Negative exponents invert the coordinate; the caller
    /// is responsible for keeping those coordinates nonzero.
    pub fn evaluate<S: Scalar>(&self, point: &[S], ctx: &S::Context) -> S {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut cache: Vec<BTreeMap<i64, S>> = vec![BTreeMap::new(); self.nvars];
        let mut acc = S::zero_with(ctx);
        for (e, c) in &self.terms {
            let mut t = S::from_rational(c, ctx);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache[v].entry(k).or_insert_with(|| point[v].powi(k)).clone();
                t = t * p;
            }
            acc = acc + t;
        }
        acc
    }

    /// Coefficients with respect to `x_{v+1}`, each with that variable removed.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(rest, c.clone());
        }
        out
    }

    /// Coefficient of `x_{v+1}^d`, as a polynomial free of that variable.
    pub fn coefficient_in(&self, v: usize, d: i64) -> LaurentPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut rest = e.clone();
                rest[v] = 0;
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Splits off a rational content so that the remaining polynomial has
    /// coprime integer coefficients and a positive leading coefficient.
    /// Returns `(c, p)` with `self = c·p`; `(0, 0)` for zero.
    pub fn primitive(&self) -> (BigRational, LaurentPoly) {
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        let mut content = BigRational::new(gcd, lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact quotient `self / d` for true polynomials, or `None` if `d` does
    /// not divide `self`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (de, dc) = d.leading()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.is_monomial() {
            let neg: Vec<i64> = de.iter().map(|k| -k).collect();
            let q = self.mul_monomial(&neg).scale(&dc.recip());
            return q.is_polynomial().then_some(q);
        }
        let (smax, dmax) = (self.max_exponents(), d.max_exponents());
        if smax.iter().zip(&dmax).any(|(a, b)| a < b) {
            return None;
        }
        let dinv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            let qe: Exponent = re.iter().zip(de).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&k| k < 0) {
                return None;
            }
            let qc = rc * &dinv;
            for (e, c) in &d.terms {
                let te: Exponent = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(c * &qc));
            }
            quot.terms.insert(qe, qc);
        }
        Some(quot)
    }

    pub fn display_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = monomial_string(e, var);
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&abs.to_string()),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub(crate) fn monomial_string(e: &[i64], var: &str) -> String {
    let mut parts = Vec::new();
    for (v, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("{var}{}", v + 1)),
            k if k < 0 => parts.push(format!("{var}{}^({k})", v + 1)),
            k => parts.push(format!("{var}{}^{k}", v + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
