use std::fmt::Display;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{BirationalMap, Real, Scalar};
use crate::error::{Error, Result};

/// Default working precision of float mode, in decimal digits.
pub const DEFAULT_DIGITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float { digits: usize },
}

/// Scalars an orbit can be computed in.
pub trait OrbitScalar: Scalar + Display + Send + Sync {
    /// `log10 |a - b| / |b|`; `-inf` when equal.
    fn log10_rel_diff(&self, other: &Self) -> f64;
    fn mode(&self) -> Mode;
}

impl OrbitScalar for BigRational {
    fn log10_rel_diff(&self, other: &Self) -> f64 {
        if self == other {
            return f64::NEG_INFINITY;
        }
        let d = (self - other).abs();
        let d = if other.is_zero() { d } else { d / other.abs() };
        log10_rational(&d)
    }

    fn mode(&self) -> Mode {
        Mode::Exact
    }
}

/// `log10 |q|`, valid far outside the f64 range.
pub(crate) fn log10_rational(q: &BigRational) -> f64 {
    fn log10_int(n: &num_bigint::BigInt) -> f64 {
        let shift = n.bits().saturating_sub(60);
        let top = (n.abs() >> shift).to_f64().unwrap_or(f64::NAN);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_int(q.numer()) - log10_int(q.denom())
}

impl OrbitScalar for Real {
    fn log10_rel_diff(&self, other: &Self) -> f64 {
        self.relative_error(other).log10_abs()
    }

    fn mode(&self) -> Mode {
        Mode::Float {
            digits: ((self.bits().saturating_sub(16)) as f64 / std::f64::consts::LOG2_10).round() as usize,
        }
    }
}

/// Largest coordinatewise relative difference, as a log10.
pub fn log10_distance<S: OrbitScalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.log10_rel_diff(y))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit<S> {
    pub map: BirationalMap,
    /// `points[k] = map^k(points[0])`.
    pub points: Vec<Vec<S>>,
}

impl<S: OrbitScalar> Orbit<S> {
    pub fn start(&self) -> &[S] {
        &self.points[0]
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn mode(&self) -> Mode {
        self.points[0].first().map_or(Mode::Exact, OrbitScalar::mode)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::io::SCHEMA_VERSION,
            "map": self.map.to_strings(),
            "mode": self.mode(),
            "points": render_points(&self.points),
        })
    }
}

pub fn render_point<S: Display>(p: &[S]) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

pub fn render_points<S: Display>(ps: &[Vec<S>]) -> Vec<Vec<String>> {
    ps.iter().map(|p| render_point(p)).collect()
}

pub(crate) fn check_square(f: &BirationalMap) -> Result<()> {
    if f.dim_in() != f.dim_out() {
        return Err(Error::DimensionMismatch {
            context: "self-map",
            expected: f.dim_in(),
            found: f.dim_out(),
        });
    }
    Ok(())
}

/// Applies `f`, reporting a vanishing denominator as a breakdown at `step`.
pub(crate) fn step<S: Scalar>(f: &BirationalMap, x: &[S], step: usize) -> Result<Vec<S>> {
    f.evaluate(x).map_err(|e| match e {
        Error::ZeroDenominator(_) => Error::OrbitBreakdown { step },
        other => other,
    })
}

pub fn iterate_orbit<S: OrbitScalar>(f: &BirationalMap, x0: &[S], n: usize) -> Result<Orbit<S>> {
    check_square(f)?;
    if x0.len() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "starting point",
            expected: f.dim_in(),
            found: x0.len(),
        });
    }
    if !x0.iter().all(Scalar::positive) {
        return Err(Error::InvalidInput("starting point must have positive coordinates".into()));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    for k in 1..=n {
        let next = step(f, &points[k - 1], k)?;
        points.push(next);
    }
    Ok(Orbit {
        map: f.clone(),
        points,
    })
}
