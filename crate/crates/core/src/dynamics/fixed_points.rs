use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::orbit::{check_square, log10_distance, render_point};
use crate::algebra::{bits_for_digits, BirationalMap, LaurentPoly, Real, Scalar};
use crate::error::{Error, Result};

/// Starting grid for the Newton search: `grid` points per axis spread over
/// `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub lo: BigRational,
    pub hi: BigRational,
    pub grid: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            lo: BigRational::new(1.into(), 10.into()),
            hi: BigRational::from_integer(5.into()),
            grid: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicPoint {
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Real>,
    pub period: usize,
    /// `log10 max_i |f^(p)(x)_i - x_i|`.
    pub residual_log10: f64,
    /// `log10` of the relative change when re-solved at twice the precision.
    pub drift_log10: f64,
    pub digits: usize,
}

fn ser_point<S: serde::Serializer>(p: &[Real], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(render_point(p))
}

/// Cleared system `num_i(x) - x_i den_i(x) = 0` for `f^(p)(x) = x`.
struct System {
    eqs: Vec<LaurentPoly>,
    jac: Vec<Vec<LaurentPoly>>,
}

impl System {
    fn new(g: &BirationalMap) -> Self {
        let n = g.dim_in();
        let eqs: Vec<LaurentPoly> = g
            .components()
            .iter()
            .enumerate()
            .map(|(i, c)| c.numerator() - &(&LaurentPoly::var(n, i) * c.denominator()))
            .collect();
        let jac = eqs.iter().map(|e| (0..n).map(|j| e.derivative(j)).collect()).collect();
        System { eqs, jac }
    }

    fn residual(&self, x: &[Real]) -> (Vec<Real>, f64) {
        let ctx = x[0].context();
        let v: Vec<Real> = self.eqs.iter().map(|e| e.evaluate(x, &ctx)).collect();
        let norm = v.iter().map(Real::log10_abs).fold(f64::NEG_INFINITY, f64::max);
        (v, norm)
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Option<Vec<Real>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].vanishes() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let factor = a[row][col].clone() / a[col][col].clone();
            if factor.vanishes() {
                continue;
            }
            for k in col..n {
                let t = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - t;
            }
            let t = factor * b[col].clone();
            b[row] = b[row].clone() - t;
        }
    }
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for k in (i + 1)..n {
            s = s - a[i][k].clone() * x[k].clone();
        }
        x[i] = s / a[i][i].clone();
    }
    Some(x)
}

const MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 60;

/// Damped Newton iteration kept inside the positive orthant.
fn newton(sys: &System, mut x: Vec<Real>, digits: usize) -> Option<Vec<Real>> {
    let ctx = x[0].context();
    let (mut f, mut norm) = sys.residual(&x);
    let floor = -(digits as f64) - 4.0;
    for _ in 0..MAX_ITERATIONS {
        let j: Vec<Vec<Real>> = sys
            .jac
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&x, &ctx)).collect())
            .collect();
        let delta = solve(j, f.iter().map(|v| -v.clone()).collect())?;
        let size = log10_distance(&x.iter().zip(&delta).map(|(a, d)| a.clone() + d.clone()).collect::<Vec<_>>(), &x);
        let mut t = Real::one_with(&ctx);
        let half = Real::from_rational(&BigRational::new(1.into(), 2.into()), &ctx);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<Real> = x.iter().zip(&delta).map(|(a, d)| a.clone() + t.clone() * d.clone()).collect();
            if cand.iter().all(Scalar::positive) {
                let (fc, nc) = sys.residual(&cand);
                if nc < norm || nc < floor {
                    accepted = Some((cand, fc, nc));
                    break;
                }
            }
            t = t * half.clone();
        }
        let (cand, fc, nc) = accepted?;
        x = cand;
        f = fc;
        norm = nc;
        if size < -(digits as f64) + 2.0 {
            return Some(x);
        }
    }
    None
}

fn to_precision(x: &[Real], digits: usize) -> Vec<Real> {
    let bits = bits_for_digits(digits);
    x.iter().map(|v| Real::from_rational_bits(&v.to_rational(), bits)).collect()
}

fn divisors(p: usize) -> impl Iterator<Item = usize> {
    (1..p).filter(move |d| p % d == 0)
}

fn iterate_float(f: &BirationalMap, x: &[Real], k: usize) -> Option<Vec<Real>> {
    let mut y = x.to_vec();
    for _ in 0..k {
        y = f.evaluate(&y).ok()?;
    }
    Some(y)
}

/// Positive solutions of `f^(p)(x) = x` of minimal period `p`, located by
/// damped Newton from a grid of starts and refined at twice the precision
/// to measure drift.
pub fn find_periodic_points(f: &BirationalMap, p: usize, search: &SearchBox, digits: usize) -> Result<Vec<PeriodicPoint>> {
    check_square(f)?;
    let n = f.dim_in();
    if n == 0 || n > 3 {
        return Err(Error::InvalidInput(format!(
            "periodic point search supports dimensions 1 to 3, got {n}"
        )));
    }
    if p == 0 || search.grid == 0 || search.lo <= BigRational::from_integer(0.into()) || search.hi < search.lo {
        return Err(Error::InvalidInput("period, grid and a positive box are required".into()));
    }
    let g = f.iterate(p)?;
    let sys = System::new(&g);
    let bits = bits_for_digits(digits);
    let axis: Vec<BigRational> = (0..search.grid)
        .map(|i| {
            let t = BigRational::new(BigInt::from(2 * i + 1), BigInt::from(2 * search.grid));
            &search.lo + (&search.hi - &search.lo) * t
        })
        .collect();
    let mut starts: Vec<Vec<BigRational>> = vec![vec![]];
    for _ in 0..n {
        starts = starts
            .into_iter()
            .flat_map(|s| {
                axis.iter().map(move |a| {
                    let mut t = s.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    let candidates: Vec<Vec<Real>> = starts
        .par_iter()
        .filter_map(|s| {
            let x0: Vec<Real> = s.iter().map(|q| Real::from_rational_bits(q, bits)).collect();
            newton(&sys, x0, digits)
        })
        .collect();

    let same = -(digits as f64) / 3.0;
    let mut found: Vec<Vec<Real>> = Vec::new();
    for c in candidates {
        if found.iter().all(|x| log10_distance(&c, x) > same) {
            found.push(c);
        }
    }
    let mut out = Vec::new();
    for x in found {
        let gx = g.evaluate(&x)?;
        let residual_log10 = gx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a.clone() - b.clone()).log10_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        if residual_log10 > -(digits as f64) / 2.0 {
            continue;
        }
        let shorter = divisors(p).any(|d| iterate_float(f, &x, d).is_some_and(|y| log10_distance(&y, &x) < same));
        if shorter {
            continue;
        }
        let drift_log10 = match newton(&sys, to_precision(&x, 2 * digits), 2 * digits) {
            Some(hi) => log10_distance(&to_precision(&x, 2 * digits), &hi),
            None => f64::INFINITY,
        };
        out.push(PeriodicPoint {
            point: x,
            period: p,
            residual_log10,
            drift_log10,
            digits,
        });
    }
    out.sort_by(|a, b| {
        a.point
            .iter()
            .zip(&b.point)
            .map(|(u, v)| u.partial_cmp(v).unwrap())
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}
