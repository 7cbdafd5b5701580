//! Rational functions in canonical form.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{monomial_string, Exponent, LaurentPoly};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `num / den` with both true polynomials, no common factor (monomial or
/// otherwise), and `den` an integer polynomial with content 1 and positive
/// lex-leading coefficient. Two rational functions are equal exactly when
/// their stored forms coincide.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        Self::with_hints(num, den, &[])
    }

    /// Like [`RationalFunction::new`], trying the candidate factors `hints`
    /// by exact division before falling back to a full gcd.
    pub fn with_hints(num: LaurentPoly, den: LaurentPoly, hints: &[LaurentPoly]) -> Result<Self> {
        assert_eq!(num.nvars(), den.nvars(), "variable count");
        if den.is_zero() {
            return Err(Error::ZeroDenominator(num.to_string()));
        }
        Ok(normalize(num, den, hints))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let n = p.nvars();
        normalize(p, LaurentPoly::one(n), &[])
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RationalFunction {
            num: LaurentPoly::constant(nvars, c),
            den: LaurentPoly::one(nvars),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: LaurentPoly::zero(nvars),
            den: LaurentPoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RationalFunction {
            num: LaurentPoly::var(nvars, i),
            den: LaurentPoly::one(nvars),
        }
    }

    /// The Laurent monomial `x^e`.
    pub fn monomial(e: &[i64]) -> Self {
        let mono = LaurentPoly::monomial(e.to_vec(), BigRational::one());
        Self::from_poly(mono)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    /// Already canonical; kept as an explicit operation for callers that
    /// want to state the intent.
    pub fn normal_form(&self) -> Self {
        self.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// `Some(e)` if this is exactly the Laurent monomial `x^e` (coefficient 1).
    pub fn as_monomial(&self) -> Option<Exponent> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let (en, cn) = self.num.leading().unwrap();
        let (ed, cd) = self.den.leading().unwrap();
        if !cn.is_one() || !cd.is_one() {
            return None;
        }
        Some(en.iter().zip(ed).map(|(a, b)| a - b).collect())
    }

    pub fn is_var(&self, i: usize) -> bool {
        self.den.is_one() && self.num == LaurentPoly::var(self.nvars(), i)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return normalize(&self.num + &rhs.num, self.den.clone(), &[]);
        }
        // With d1 = g·e1 and d2 = g·e2, the numerator n1·e2 + n2·e1 is coprime
        // to e1·e2, so only a factor of g can cancel.
        let g = gcd(&self.den, &rhs.den);
        let e1 = self.den.exact_div(&g).expect("gcd divides");
        let e2 = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &e2) + &(&rhs.num * &e1);
        if num.is_zero() {
            return Self::zero(self.nvars());
        }
        let h = if g.is_one() { g.clone() } else { gcd(&num, &g) };
        let num = num.exact_div(&h).expect("gcd divides");
        let g = g.exact_div(&h).expect("gcd divides");
        finish(num, &(&g * &e1) * &e2)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // Cross-cancel before multiplying; the result is then already coprime.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        finish(&n1 * &n2, &d1 * &d2)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator(self.den.to_string()));
        }
        Ok(finish(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Ok(finish(base.num.pow(k), base.den.pow(k)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let num = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        normalize(num, self.den.pow(2), &[self.den.clone()])
    }

    pub fn evaluate<S: Scalar>(&self, point: &[S], ctx: &S::Context) -> Result<S> {
        let d = self.den.evaluate(point, ctx);
        if d.vanishes() {
            return Err(Error::ZeroDenominator(self.den.to_string()));
        }
        Ok(self.num.evaluate(point, ctx) / d)
    }

    /// Substitutes `x_j ↦ subs[j]`.
    pub fn compose(&self, subs: &[RationalFunction]) -> Result<Self> {
        if subs.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                context: "composition arguments",
                expected: self.nvars(),
                found: subs.len(),
            });
        }
        let m = subs.first().map(RationalFunction::nvars).unwrap_or(0);
        if subs.iter().any(|s| s.nvars() != m) {
            return Err(Error::InvalidInput("substitutions disagree on variable count".into()));
        }
        if let Some(c) = self.as_constant() {
            return Ok(Self::constant(m, c));
        }
        let top: Vec<i64> = self
            .num
            .max_exponents()
            .iter()
            .zip(self.den.max_exponents())
            .map(|(a, b)| (*a).max(b))
            .collect();
        let mut powers = PowerCache::new(subs, &top);
        let num = powers.expand(&self.num)?;
        let den = powers.expand(&self.den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("{self} after substitution")));
        }
        let hints: Vec<LaurentPoly> = subs
            .iter()
            .flat_map(|s| [s.num.clone(), s.den.clone()])
            .filter(|p| p.len() > 1)
            .collect();
        Ok(normalize(num, den, &hints))
    }

    pub fn display_with(&self, var: &str) -> String {
        let num = self.num.display_with(var);
        if self.den.is_one() {
            return num;
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        let den = self.den.display_with(var);
        let simple_den = self.den.is_monomial()
            && self.den.leading().is_some_and(|(e, _)| e.iter().filter(|&&k| k != 0).count() == 1);
        if simple_den {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }

    /// Parses a canonical string such as `(x2*x5 + x3*x4)/x1`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        super::parse::parse_rational_function(s, nvars)
    }
}

/// Monomial rendering used by callers that print exponent vectors.
pub fn format_monomial(e: &[i64], var: &str) -> String {
    let pos: Vec<i64> = e.iter().map(|&k| k.max(0)).collect();
    let negs: Vec<i64> = e.iter().map(|&k| (-k).max(0)).collect();
    let n = monomial_string(&pos, var);
    let d = monomial_string(&negs, var);
    let n = if n.is_empty() { "1".to_string() } else { n };
    match negs.iter().filter(|&&k| k != 0).count() {
        0 => n,
        1 => format!("{n}/{d}"),
        _ => format!("{n}/({d})"),
    }
}

struct PowerCache<'a> {
    subs: &'a [RationalFunction],
    top: &'a [i64],
    num_pows: Vec<Vec<LaurentPoly>>,
    den_pows: Vec<Vec<LaurentPoly>>,
}

impl<'a> PowerCache<'a> {
    fn new(subs: &'a [RationalFunction], top: &'a [i64]) -> Self {
        let k = subs.len();
        PowerCache {
            subs,
            top,
            num_pows: vec![Vec::new(); k],
            den_pows: vec![Vec::new(); k],
        }
    }

    fn power(cache: &mut [Vec<LaurentPoly>], base: &LaurentPoly, j: usize, e: usize) -> LaurentPoly {
        let list = &mut cache[j];
        if list.is_empty() {
            list.push(LaurentPoly::one(base.nvars()));
        }
        while list.len() <= e {
            let next = list.last().unwrap() * base;
            list.push(next);
        }
        list[e].clone()
    }

    /// `p(a/b) · Π b_j^{top_j}` as a polynomial.
    fn expand(&mut self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let m = self.subs.first().map(RationalFunction::nvars).unwrap_or(0);
        let mut acc = LaurentPoly::zero(m);
        for (e, c) in p.terms() {
            let mut t = LaurentPoly::constant(m, c.clone());
            for (j, &k) in e.iter().enumerate() {
                let top = self.top[j];
                if top == 0 {
                    continue;
                }
                let s = &self.subs[j];
                if k > 0 {
                    t = &t * &Self::power(&mut self.num_pows, &s.num, j, k as usize);
                }
                if top - k > 0 && !s.den.is_one() {
                    t = &t * &Self::power(&mut self.den_pows, &s.den, j, (top - k) as usize);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

/// Canonical form of `num / den` for a nonzero `den`.
fn normalize(num: LaurentPoly, den: LaurentPoly, hints: &[LaurentPoly]) -> RationalFunction {
    let n = num.nvars();
    if num.is_zero() {
        return RationalFunction::zero(n);
    }
    // Pull out monomial content from both sides.
    let (mn, md) = (num.min_exponents(), den.min_exponents());
    let diff: Vec<i64> = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
    let up: Vec<i64> = diff.iter().map(|&k| k.max(0)).collect();
    let down: Vec<i64> = diff.iter().map(|&k| (-k).max(0)).collect();
    let shift_n: Vec<i64> = mn.iter().zip(&up).map(|(a, u)| u - a).collect();
    let shift_d: Vec<i64> = md.iter().zip(&down).map(|(a, d)| d - a).collect();
    let mut num = num.mul_monomial(&shift_n);
    let mut den = den.mul_monomial(&shift_d);
    if den.is_monomial() {
        return finish(num, den);
    }
    let strip = |p: &LaurentPoly| p.mul_monomial(&p.min_exponents().iter().map(|k| -k).collect::<Vec<_>>());
    for h in hints {
        let h = strip(h);
        if h.len() < 2 {
            continue;
        }
        loop {
            let (Some(qn), Some(qd)) = (num.exact_div(&h), den.exact_div(&h)) else {
                break;
            };
            num = qn;
            den = qd;
        }
    }
    if !den.is_monomial() && !num.is_constant() {
        let g = gcd(&num, &den);
        if !g.is_one() {
            num = num.exact_div(&g).expect("gcd divides numerator");
            den = den.exact_div(&g).expect("gcd divides denominator");
        }
    }
    finish(num, den)
}

/// Fixes the constant: denominator primitive with positive leading term.
/// Assumes `num` and `den` are already coprime polynomials.
fn finish(num: LaurentPoly, den: LaurentPoly) -> RationalFunction {
    let (c, den) = den.primitive();
    let num = num.scale(&c.recip());
    RationalFunction { num, den }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> RationalFunction {
        RationalFunction::var(n, i)
    }

    #[test]
    fn difference_of_squares_cancels() {
        let (a, b) = (LaurentPoly::var(2, 0), LaurentPoly::var(2, 1));
        let f = RationalFunction::new(&(&a * &a) - &(&b * &b), &a - &b).unwrap();
        assert_eq!(f, RationalFunction::from_poly(&a + &b));
    }

    #[test]
    fn scaling_is_consistent() {
        let f = x(2, 0).div(&x(2, 0).add(&x(2, 1))).unwrap();
        let two = BigRational::from_integer(2.into());
        let g = RationalFunction::new(f.numerator().scale(&two), f.denominator().clone()).unwrap();
        assert_eq!(g, f.scale(&two));
        assert_eq!(g.numerator(), &f.numerator().scale(&two));
    }

    #[test]
    fn display_forms() {
        let n = 5;
        let f = x(n, 1)
            .mul(&x(n, 4))
            .add(&x(n, 2).mul(&x(n, 3)))
            .div(&x(n, 0))
            .unwrap();
        assert_eq!(f.to_string(), "(x2*x5 + x3*x4)/x1");
        let g = x(n, 1).mul(&x(n, 4)).div(&x(n, 2).mul(&x(n, 3))).unwrap();
        assert_eq!(g.to_string(), "x2*x5/(x3*x4)");
        assert_eq!(x(n, 0).neg().div(&x(n, 1).pow(2).unwrap()).unwrap().to_string(), "-x1/x2^2");
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert!(x(1, 0).div(&RationalFunction::zero(1)).is_err());
        let f = RationalFunction::one(1).div(&x(1, 0)).unwrap();
        assert!(f.evaluate(&[BigRational::zero()], &()).is_err());
    }

    #[test]
    fn compose_substitutes() {
        let n = 2;
        // f = x1/x2 at (x1 + x2, x1 - x2)
        let f = x(n, 0).div(&x(n, 1)).unwrap();
        let g = f.compose(&[x(n, 0).add(&x(n, 1)), x(n, 0).sub(&x(n, 1))]).unwrap();
        assert_eq!(g, x(n, 0).add(&x(n, 1)).div(&x(n, 0).sub(&x(n, 1))).unwrap());
    }
}
