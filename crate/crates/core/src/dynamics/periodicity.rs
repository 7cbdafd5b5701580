use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::orbit::{check_square, step};
use crate::algebra::{BirationalMap, MonomialMap};
use crate::error::{Error, Result};
use crate::sampling::random_point;

pub const DEFAULT_GLOBAL_P_MAX: usize = 12;
pub const SCREEN_SAMPLES: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeriodKind {
    Global { period: usize },
    Pointwise { period: usize, point: Vec<String> },
    NoneUpTo { bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    /// Every component of the iterate normalizes to its coordinate function.
    Symbolic,
    Sampled { seed: u64, samples: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    #[serde(flatten)]
    pub kind: PeriodKind,
    #[serde(flatten)]
    pub certificate: Certificate,
    /// Minimal period of each screened sample, `None` if it did not close.
    pub sample_periods: Vec<Option<usize>>,
}

impl PeriodReport {
    pub fn global_period(&self) -> Option<usize> {
        match self.kind {
            PeriodKind::Global { period } => Some(period),
            _ => None,
        }
    }
}

/// Smallest `k ≤ p_max` with `f^k(x) = x`, by exact iteration.
pub(crate) fn return_time(f: &BirationalMap, x: &[BigRational], p_max: usize) -> Result<Option<usize>> {
    let mut y = x.to_vec();
    for k in 1..=p_max {
        y = step(f, &y, k)?;
        if y == x {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Screens seeded sample orbits for a common period, then certifies the
/// least common multiple `p` of the sampled periods by checking `f^(p) = id`
/// symbolically. Any global period is a multiple of every pointwise one, so
/// a certified `p` is minimal.
pub fn detect_global_periodicity(f: &BirationalMap, p_max: usize, seed: u64) -> Result<PeriodReport> {
    check_square(f)?;
    let n = f.dim_in();
    let sample_periods = (0..SCREEN_SAMPLES as u64)
        .into_par_iter()
        .map(|i| {
            // Resample past the rare start whose orbit hits a pole.
            let mut idx = i;
            loop {
                match return_time(f, &random_point(seed, idx, n), p_max) {
                    Err(Error::OrbitBreakdown { .. }) => idx += SCREEN_SAMPLES as u64,
                    other => return other,
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let sampled = Certificate::Sampled {
        seed,
        samples: SCREEN_SAMPLES,
        bound: p_max,
    };
    let none = |sample_periods| PeriodReport {
        kind: PeriodKind::NoneUpTo { bound: p_max },
        certificate: sampled.clone(),
        sample_periods,
    };
    let Some(candidate) = sample_periods
        .iter()
        .try_fold(1usize, |acc, p| p.map(|p| acc.lcm(&p)))
    else {
        return Ok(none(sample_periods));
    };
    if candidate > p_max || !f.iterate(candidate)?.is_identity() {
        return Ok(none(sample_periods));
    }
    Ok(PeriodReport {
        kind: PeriodKind::Global { period: candidate },
        certificate: Certificate::Symbolic,
        sample_periods,
    })
}

/// `π ∘ f^(p) = π` as an identity of rational functions.
pub fn first_integral_check(f: &BirationalMap, pi: &MonomialMap, p: usize) -> Result<bool> {
    check_square(f)?;
    if pi.dim_out() == 0 {
        return Ok(true);
    }
    if pi.dim_in() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "first integral",
            expected: f.dim_in(),
            found: pi.dim_in(),
        });
    }
    let base = pi.to_birational();
    let mut g = base.clone();
    for _ in 0..p {
        g = g.compose(f)?;
    }
    Ok(g == base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_involution() {
        let id = BirationalMap::identity(3);
        assert_eq!(detect_global_periodicity(&id, 12, 1).unwrap().global_period(), Some(1));
        let inv = BirationalMap::parse(&["1/x1", "x2"], None).unwrap();
        assert_eq!(detect_global_periodicity(&inv, 12, 1).unwrap().global_period(), Some(2));
    }

    #[test]
    fn lyness_is_five_periodic() {
        let f = BirationalMap::parse(&["y2", "(1+y2)/y1"], None).unwrap();
        let report = detect_global_periodicity(&f, 12, 5).unwrap();
        assert_eq!(report.kind, PeriodKind::Global { period: 5 });
        assert_eq!(report.certificate, Certificate::Symbolic);
        let report = detect_global_periodicity(&f, 4, 5).unwrap();
        assert_eq!(report.kind, PeriodKind::NoneUpTo { bound: 4 });
    }

    #[test]
    fn empty_first_integral_is_vacuous() {
        let f = BirationalMap::parse(&["x2", "x1 + x2"], None).unwrap();
        assert!(first_integral_check(&f, &MonomialMap::empty(2), 3).unwrap());
        let pi = MonomialMap::from_rows(&[vec![1, 1]], 2).unwrap();
        assert!(!first_integral_check(&f, &pi, 3).unwrap());
    }
}
