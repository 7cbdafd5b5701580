//! Recursive-descent parser for rational-function strings.
//!
//! Grammar: sums of `*`/`/` products of powers; atoms are integers,
//! variables (`x3`, `y12`; the letters are ignored, the index is 1-based)
//! and parenthesized expressions. Exponents are integers, optionally signed
//! or parenthesized: `x1^2`, `x1^-1`, `x1^(-1)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

pub fn parse_rational_function(s: &str, nvars: usize) -> Result<RationalFunction> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        nvars,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Largest variable index appearing in `s` (1-based), or 0.
pub fn max_variable_index(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if let Ok(k) = s[start..i].parse::<usize>() {
                best = best.max(k);
            }
        } else {
            i += 1;
        }
    }
    best
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|_| Error::Parse {
                    position: at,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = if self.eat(b'(') {
            let e = self.signed_int()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')' after exponent"));
            }
            e
        } else {
            self.signed_int()?
        };
        base.pow(e).map_err(|_| Error::Parse {
            position: at,
            message: "negative power of zero".into(),
        })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected integer exponent"));
        }
        let v: i64 = digits.parse().map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let v: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(RationalFunction::constant(self.nvars, BigRational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let idx_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx: usize = std::str::from_utf8(&self.src[idx_start..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        position: start,
                        message: "variables are written as a letter prefix and an index, e.g. x3".into(),
                    })?;
                if idx == 0 || idx > self.nvars {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("variable index {idx} outside 1..={}", self.nvars),
                    });
                }
                Ok(RationalFunction::var(self.nvars, idx - 1))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_canonical_strings() {
        for s in [
            "(x2*x5 + x3*x4)/x1",
            "x2*x5/(x3*x4)",
            "(y2 + 1)/(y1*y2)",
            "-3/2*x1^2/x2",
            "x1^3",
            "0",
            "7",
        ] {
            let f = parse_rational_function(s, 5).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_rational_function(&printed, 5).unwrap(), f, "{s} -> {printed}");
        }
    }

    #[test]
    fn negative_exponents_and_precedence() {
        let a = parse_rational_function("x1^-2*x2", 2).unwrap();
        let b = parse_rational_function("x2/x1^(2)", 2).unwrap();
        assert_eq!(a, b);
        let c = parse_rational_function("1 + 2*3^2", 1).unwrap();
        assert_eq!(c.as_constant(), Some(BigRational::from_integer(19.into())));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_rational_function("x1 +", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational_function("x3", 2), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_rational_function("x1/(x1 - x1)", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational_function("(x1", 1), Err(Error::Parse { .. })));
    }

    #[test]
    fn max_index() {
        assert_eq!(max_variable_index("(x2*x7 + x4*x5)/x1"), 7);
        assert_eq!(max_variable_index("3"), 0);
    }
}
