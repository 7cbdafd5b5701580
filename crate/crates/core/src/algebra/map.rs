//! Rational and monomial maps between positive orthants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::max_variable_index;
use super::poly::LaurentPoly;
use super::ratfunc::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::lattice::IntMatrix;

/// A tuple of rational functions in `dim_in` variables. The variable letter
/// only affects printing.
#[derive(Clone)]
pub struct BirationalMap {
    dim_in: usize,
    components: Vec<RationalFunction>,
    var: String,
}

impl PartialEq for BirationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.dim_in == other.dim_in && self.components == other.components
    }
}

impl Eq for BirationalMap {}

fn point_context<S: Scalar>(p: &[S]) -> Result<S::Context> {
    p.first()
        .map(Scalar::context)
        .ok_or_else(|| Error::InvalidInput("cannot evaluate at a point with no coordinates".into()))
}

fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        });
    }
    Ok(())
}

impl BirationalMap {
    pub fn new(dim_in: usize, components: Vec<RationalFunction>) -> Result<Self> {
        for c in &components {
            check_dim("component variable count", dim_in, c.nvars())?;
        }
        Ok(BirationalMap {
            dim_in,
            components,
            var: "x".into(),
        })
    }

    pub fn identity(n: usize) -> Self {
        BirationalMap {
            dim_in: n,
            components: (0..n).map(|i| RationalFunction::var(n, i)).collect(),
            var: "x".into(),
        }
    }

    /// Parses component strings; `dim_in` defaults to the larger of the
    /// component count and the highest variable index used.
    pub fn parse(components: &[impl AsRef<str>], dim_in: Option<usize>) -> Result<Self> {
        let n = dim_in.unwrap_or_else(|| {
            components
                .iter()
                .map(|c| max_variable_index(c.as_ref()))
                .max()
                .unwrap_or(0)
                .max(components.len())
        });
        let var = components
            .iter()
            .find_map(|c| c.as_ref().chars().find(char::is_ascii_alphabetic))
            .map(String::from)
            .unwrap_or_else(|| "x".into());
        let comps = components
            .iter()
            .map(|c| RationalFunction::parse(c.as_ref(), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(n, comps)?.with_var(&var))
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RationalFunction {
        &self.components[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dim_in == self.dim_out() && self.components.iter().enumerate().all(|(i, c)| c.is_var(i))
    }

    pub fn evaluate<S: Scalar>(&self, p: &[S]) -> Result<Vec<S>> {
        check_dim("evaluation point", self.dim_in, p.len())?;
        let ctx = point_context(p)?;
        self.components.iter().map(|c| c.evaluate(p, &ctx)).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BirationalMap) -> Result<BirationalMap> {
        check_dim("composition", self.dim_in, inner.dim_out())?;
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(BirationalMap {
            dim_in: inner.dim_in,
            components,
            var: inner.var.clone(),
        })
    }

    /// `k`-fold iterate, built by repeated composition with `self`.
    pub fn iterate(&self, k: usize) -> Result<BirationalMap> {
        check_dim("iteration", self.dim_in, self.dim_out())?;
        let mut acc = BirationalMap::identity(self.dim_in).with_var(&self.var);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn jacobian<S: Scalar>(&self, p: &[S]) -> Result<Vec<Vec<S>>> {
        self.symbolic_jacobian().evaluate(p)
    }

    pub fn symbolic_jacobian(&self) -> SymbolicJacobian {
        SymbolicJacobian::new(self)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(|c| c.display_with(&self.var)).collect()
    }
}

impl fmt::Display for BirationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl fmt::Debug for BirationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default)]
    dim_in: Option<usize>,
    components: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapInput {
    Full(MapRepr),
    Bare(Vec<String>),
}

impl Serialize for BirationalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr {
            schema: Some(SCHEMA_VERSION.into()),
            dim_in: Some(self.dim_in),
            components: self.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BirationalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (dim_in, components) = match MapInput::deserialize(d)? {
            MapInput::Full(r) => (r.dim_in, r.components),
            MapInput::Bare(c) => (None, c),
        };
        BirationalMap::parse(&components, dim_in).map_err(serde::de::Error::custom)
    }
}

/// Partial derivatives of every component kept symbolically so that the
/// Jacobian can be evaluated at many points.
pub struct SymbolicJacobian {
    dim_in: usize,
    parts: Vec<ComponentParts>,
}

struct ComponentParts {
    num: LaurentPoly,
    den: LaurentPoly,
    dnum: Vec<LaurentPoly>,
    dden: Vec<LaurentPoly>,
}

impl SymbolicJacobian {
    fn new(map: &BirationalMap) -> Self {
        let parts = map
            .components
            .iter()
            .map(|c| {
                let (num, den) = (c.numerator().clone(), c.denominator().clone());
                ComponentParts {
                    dnum: (0..map.dim_in).map(|v| num.derivative(v)).collect(),
                    dden: (0..map.dim_in).map(|v| den.derivative(v)).collect(),
                    num,
                    den,
                }
            })
            .collect();
        SymbolicJacobian {
            dim_in: map.dim_in,
            parts,
        }
    }

    /// Row `i` holds the partials of component `i`.
    pub fn evaluate<S: Scalar>(&self, p: &[S]) -> Result<Vec<Vec<S>>> {
        check_dim("jacobian point", self.dim_in, p.len())?;
        let ctx = point_context(p)?;
        self.parts
            .iter()
            .map(|c| {
                let d = c.den.evaluate(p, &ctx);
                if d.vanishes() {
                    return Err(Error::ZeroDenominator(c.den.to_string()));
                }
                let n = c.num.evaluate(p, &ctx);
                let d2 = d.clone() * d.clone();
                Ok((0..self.dim_in)
                    .map(|v| {
                        let dn = c.dnum[v].evaluate(p, &ctx);
                        if c.dden[v].is_zero() {
                            return dn / d.clone();
                        }
                        let dd = c.dden[v].evaluate(p, &ctx);
                        (dn * d.clone() - n.clone() * dd) / d2.clone()
                    })
                    .collect())
            })
            .collect()
    }
}

/// `x ↦ (x^{u_1}, …, x^{u_r})` for the rows `u_i` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMap {
    exponents: IntMatrix,
}

fn small(e: &BigInt) -> Result<i64> {
    e.to_i64()
        .ok_or_else(|| Error::InvalidInput(format!("exponent {e} does not fit in 64 bits")))
}

impl MonomialMap {
    /// Rows must be linearly independent.
    pub fn new(exponents: IntMatrix) -> Result<Self> {
        if exponents.rank() != exponents.rows() {
            return Err(Error::InvalidInput("monomial map exponents are linearly dependent".into()));
        }
        for e in exponents.entries() {
            small(e)?;
        }
        Ok(MonomialMap { exponents })
    }

    pub fn from_rows(rows: &[Vec<i64>], dim_in: usize) -> Result<Self> {
        let vectors: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&k| k.into()).collect()).collect();
        Self::new(IntMatrix::from_vectors(dim_in, &vectors)?)
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap {
            exponents: IntMatrix::identity(n),
        }
    }

    pub fn empty(n: usize) -> Self {
        MonomialMap {
            exponents: IntMatrix::zeros(0, n),
        }
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn rows_i64(&self) -> Vec<Vec<i64>> {
        (0..self.exponents.rows())
            .map(|i| self.exponents.row(i).iter().map(|e| small(e).expect("checked")).collect())
            .collect()
    }

    pub fn dim_in(&self) -> usize {
        self.exponents.cols()
    }

    pub fn dim_out(&self) -> usize {
        self.exponents.rows()
    }

    pub fn evaluate<S: Scalar>(&self, p: &[S]) -> Result<Vec<S>> {
        check_dim("evaluation point", self.dim_in(), p.len())?;
        let ctx = point_context(p)?;
        self.rows_i64()
            .iter()
            .map(|u| {
                let mut acc = S::one_with(&ctx);
                for (x, &k) in p.iter().zip(u) {
                    if k == 0 {
                        continue;
                    }
                    if k < 0 && x.vanishes() {
                        return Err(Error::ZeroDenominator(format!("monomial with exponent {k}")));
                    }
                    acc = acc * x.powi(k);
                }
                Ok(acc)
            })
            .collect()
    }

    /// `self ∘ inner`: exponent matrices multiply.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap> {
        let exponents = self.exponents.mul(&inner.exponents)?;
        for e in exponents.entries() {
            small(e)?;
        }
        Ok(MonomialMap { exponents })
    }

    pub fn to_birational(&self) -> BirationalMap {
        let components = self.rows_i64().iter().map(|u| RationalFunction::monomial(u)).collect();
        BirationalMap::new(self.dim_in(), components).expect("rows have dim_in entries")
    }

    /// Row `i` is `x^{u_i} · (u_ij / x_j)_j`.
    pub fn jacobian<S: Scalar>(&self, p: &[S]) -> Result<Vec<Vec<S>>> {
        let values = self.evaluate(p)?;
        let ctx = point_context(p)?;
        Ok(self
            .rows_i64()
            .iter()
            .zip(values)
            .map(|(u, y)| {
                u.iter()
                    .zip(p)
                    .map(|(&k, x)| {
                        if k == 0 {
                            S::zero_with(&ctx)
                        } else {
                            y.clone() * S::from_rational(&BigInt::from(k).into(), &ctx) / x.clone()
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn somos5() -> BirationalMap {
        BirationalMap::parse(&["x2", "x3", "x4", "x5", "(x2*x5 + x3*x4)/x1"], None).unwrap()
    }

    #[test]
    fn evaluate_somos5_at_ones() {
        let v = somos5().evaluate(&[q(1), q(1), q(1), q(1), q(1)]).unwrap();
        assert_eq!(v, vec![q(1), q(1), q(1), q(1), q(2)]);
    }

    #[test]
    fn identity_is_neutral() {
        let f = somos5();
        assert_eq!(BirationalMap::identity(5).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&BirationalMap::identity(5)).unwrap(), f);
    }

    #[test]
    fn monomial_evaluation_and_composition() {
        let pi = MonomialMap::from_rows(&[vec![1, -1, -1, 1, 0], vec![0, 1, -1, -1, 1]], 5).unwrap();
        let v = pi.evaluate(&[q(1), q(2), q(3), q(4), q(5)]).unwrap();
        assert_eq!(v, vec![BigRational::new(2.into(), 3.into()), BigRational::new(5.into(), 6.into())]);
        let p = MonomialMap::from_rows(&[vec![1, 1]], 2).unwrap();
        let composed = p.compose(&pi).unwrap();
        assert_eq!(composed.rows_i64(), vec![vec![1, 0, -2, 0, 1]]);
        let sym = p.to_birational().compose(&pi.to_birational()).unwrap();
        assert_eq!(sym, composed.to_birational());
    }

    #[test]
    fn dependent_rows_rejected() {
        assert!(MonomialMap::from_rows(&[vec![1, 2], vec![2, 4]], 2).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let f = somos5();
        let s = serde_json::to_string(&f).unwrap();
        let back: BirationalMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bare: BirationalMap = serde_json::from_str(r#"["x2", "(x2 + 1)/x1"]"#).unwrap();
        assert_eq!(bare.dim_in(), 2);
    }

    #[test]
    fn jacobian_of_identity_and_monomials() {
        let p = [q(2), q(3)];
        let id = BirationalMap::identity(2).jacobian(&p).unwrap();
        assert_eq!(id, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let m = MonomialMap::from_rows(&[vec![2, -1]], 2).unwrap();
        assert_eq!(m.jacobian(&p).unwrap(), m.to_birational().jacobian(&p).unwrap());
    }
}
