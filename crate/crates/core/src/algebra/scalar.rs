//! Number types that maps can be evaluated over: exact rationals and
//! fixed-precision binary floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_int::ops::{BitTest, UnsignedAbs};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field elements used for point evaluation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whatever is needed to build constants (precision for floats).
    type Context: Clone + fmt::Debug;

    fn context(&self) -> Self::Context;
    fn from_rational(q: &BigRational, ctx: &Self::Context) -> Self;
    fn vanishes(&self) -> bool;
    fn positive(&self) -> bool;

    fn zero_with(ctx: &Self::Context) -> Self {
        Self::from_rational(&BigRational::zero(), ctx)
    }

    fn one_with(ctx: &Self::Context) -> Self {
        Self::from_rational(&BigRational::one(), ctx)
    }

    /// Integer power; negative exponents invert. Caller guarantees a nonzero
    /// base when `e < 0`.
    fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            Self::one_with(&self.context()) / self.clone()
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one_with(&self.context());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for BigRational {
    type Context = ();

    fn context(&self) -> Self::Context {}

    fn from_rational(q: &BigRational, _: &()) -> Self {
        q.clone()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

type Float = FBig<HalfEven, 2>;

/// Binary floating point number with a fixed working precision.
///
/// Arithmetic between two values keeps the larger precision. Precisions are
/// given in decimal digits at construction and stored in bits.
#[derive(Clone)]
pub struct Real {
    value: Float,
    bits: usize,
}

/// Bits needed for `digits` significant decimal digits, plus guard bits.
pub fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
}

fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl Real {
    fn wrap(value: Float, bits: usize) -> Self {
        Real {
            value: value.with_precision(bits).value(),
            bits,
        }
    }

    pub fn from_rational_bits(q: &BigRational, bits: usize) -> Self {
        let n = Float::from(to_ibig(q.numer())).with_precision(bits).value();
        let d = Float::from(to_ibig(q.denom())).with_precision(bits).value();
        Real::wrap(n / d, bits)
    }

    pub fn with_digits(q: &BigRational, digits: usize) -> Self {
        Self::from_rational_bits(q, bits_for_digits(digits))
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Real::wrap(Float::from(v), bits)
    }

    /// Parses a decimal literal such as `1.6180339887` or `-2.5e-3`.
    pub fn parse_decimal(s: &str, bits: usize) -> Option<Self> {
        let q = decimal_to_rational(s)?;
        Some(Self::from_rational_bits(&q, bits))
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn sqrt(&self) -> Self {
        Real::wrap(self.value.sqrt(), self.bits)
    }

    pub fn abs(&self) -> Self {
        if self.value < Float::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().value()
    }

    /// log10 of |x|, accurate to roughly f64 precision even for values far
    /// outside the f64 range; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.value == Float::ZERO {
            return f64::NEG_INFINITY;
        }
        let repr = self.value.repr();
        let sig = repr.significand().clone().unsigned_abs();
        let exp = repr.exponent();
        let sig_bits = sig.bit_len() as isize;
        // Keep the top 60 bits of the significand.
        let shift = (sig_bits - 60).max(0);
        let top: f64 = (sig >> shift as usize).to_f64().value();
        (top.log2() + (shift + exp) as f64) * std::f64::consts::LOG10_2
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let dec = self.value.clone().with_base_and_precision::<10>(digits).value();
        dec.to_string()
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        let repr = self.value.repr();
        let sig = BigInt::parse_bytes(repr.significand().to_string().as_bytes(), 10)
            .expect("significand renders as decimal integer");
        let exp = repr.exponent();
        let two = BigInt::from(2);
        if exp >= 0 {
            BigRational::from_integer(sig * two.pow(exp as u32))
        } else {
            BigRational::new(sig, two.pow((-exp) as u32))
        }
    }

    /// |a - b| / max(|b|, tiny).
    pub fn relative_error(&self, reference: &Real) -> Real {
        let diff = (self.clone() - reference.clone()).abs();
        if reference.vanishes() {
            diff
        } else {
            diff / reference.abs()
        }
    }
}

/// Parses `p/q`, an integer, or a decimal such as `1.25e-3` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => decimal_to_rational(s),
    }
}

fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits.saturating_sub(16)) as f64 / std::f64::consts::LOG2_10) as usize;
        write!(f, "{}", self.to_decimal_string(digits.max(1)))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                let bits = self.bits.max(rhs.bits);
                Real::wrap(self.value $op rhs.value, bits)
            }
        }
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let bits = self.bits.max(rhs.bits);
                Real::wrap(&self.value $op &rhs.value, bits)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            value: -self.value,
            bits: self.bits,
        }
    }
}

impl Scalar for Real {
    type Context = usize;

    fn context(&self) -> usize {
        self.bits
    }

    fn from_rational(q: &BigRational, bits: &usize) -> Self {
        Real::from_rational_bits(q, *bits)
    }

    fn vanishes(&self) -> bool {
        self.value == Float::ZERO
    }

    fn positive(&self) -> bool {
        self.value > Float::ZERO
    }
}
