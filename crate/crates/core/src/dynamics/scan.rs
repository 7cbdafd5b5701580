use rayon::prelude::*;
use serde::Serialize;

use super::orbit::{check_square, log10_rational, render_point, step, DEFAULT_DIGITS};
use crate::algebra::{bits_for_digits, Real};
use crate::algebra::BirationalMap;
use crate::error::Result;
use crate::sampling::random_point;

pub const DEFAULT_SCAN_P_MAX: usize = 20;
/// Consecutive increasing steps that count as escape evidence.
pub const GROWTH_STREAK: usize = 10;
/// Escape evidence is collected for at most this many multiples of `p_max`.
pub const HORIZON_FACTOR: usize = 5;

const NOTE: &str = "sampled evidence only: absence of short periods along these orbits does not prove absence of periodic points";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleScan {
    pub sample: usize,
    pub start: Vec<String>,
    /// Smallest `k ≤ p_max` with `f^k(x) = x`.
    pub period: Option<usize>,
    /// Step at which the last coordinate completed `GROWTH_STREAK`
    /// consecutive increases.
    pub escape_step: Option<usize>,
    /// Length of the trailing run of steps on which each coordinate increased.
    pub growth_streaks: Vec<usize>,
    /// `log10` of the last coordinate along the orbit.
    pub last_log10: Vec<f64>,
}

impl SampleScan {
    pub fn escapes(&self) -> bool {
        self.escape_step.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub p_max: usize,
    pub seed: u64,
    pub samples: Vec<SampleScan>,
    /// Periods found, one entry per sample that closed up.
    pub periods_found: Vec<usize>,
    /// Every non-periodic sample shows escape growth.
    pub monotone_growth: bool,
    pub note: &'static str,
}

impl ScanReport {
    pub fn periodic_point_found(&self) -> bool {
        !self.periods_found.is_empty()
    }
}

fn scan_one(f: &BirationalMap, seed: u64, sample: usize, p_max: usize) -> Result<SampleScan> {
    let x0 = random_point(seed, sample as u64, f.dim_in());
    let n = f.dim_in();
    let mut increased: Vec<Vec<bool>> = Vec::new();
    let mut last_log10 = vec![x0.last().map_or(0.0, log10_rational)];
    let mut period = None;
    let mut x = x0.clone();
    for k in 1..=p_max {
        let y = step(f, &x, k)?;
        increased.push((0..n).map(|i| y[i] > x[i]).collect());
        last_log10.push(y.last().map_or(0.0, log10_rational));
        if y == x0 {
            period = Some(k);
            break;
        }
        x = y;
    }
    let escape_after = |inc: &[Vec<bool>]| {
        inc.iter()
            .scan(0usize, |run, v| {
                *run = if v.last() == Some(&true) { *run + 1 } else { 0 };
                Some(*run)
            })
            .position(|run| run >= GROWTH_STREAK)
            .map(|i| i + 1)
    };
    let mut escape_step = escape_after(&increased);
    if period.is_none() && escape_step.is_none() {
        // Past p_max only growth is recorded, so float arithmetic suffices.
        let bits = bits_for_digits(DEFAULT_DIGITS);
        let mut xr: Vec<Real> = x.iter().map(|q| Real::from_rational_bits(q, bits)).collect();
        for k in (p_max + 1)..=(HORIZON_FACTOR * p_max) {
            let y = step(f, &xr, k)?;
            increased.push((0..n).map(|i| y[i] > xr[i]).collect());
            last_log10.push(y.last().map_or(0.0, Real::log10_abs));
            xr = y;
            escape_step = escape_after(&increased);
            if escape_step.is_some() {
                break;
            }
        }
    }
    let growth_streaks = (0..n)
        .map(|i| increased.iter().rev().take_while(|v| v[i]).count())
        .collect();
    Ok(SampleScan {
        sample,
        start: render_point(&x0),
        period,
        escape_step,
        growth_streaks,
        last_log10,
    })
}

/// Exact search for periods `k ≤ p_max` along seeded sample orbits. Orbits
/// that neither close nor show escape within `p_max` steps are followed in
/// float arithmetic, up to `HORIZON_FACTOR · p_max` steps, until the last
/// coordinate has increased `GROWTH_STREAK` times in a row.
pub fn no_periodic_points_scan(f: &BirationalMap, p_max: usize, samples: usize, seed: u64) -> Result<ScanReport> {
    check_square(f)?;
    let scans = (0..samples)
        .into_par_iter()
        .map(|i| scan_one(f, seed, i, p_max))
        .collect::<Result<Vec<_>>>()?;
    let periods_found: Vec<usize> = scans.iter().filter_map(|s| s.period).collect();
    let monotone_growth = scans.iter().filter(|s| s.period.is_none()).all(SampleScan::escapes)
        && scans.iter().any(|s| s.period.is_none());
    Ok(ScanReport {
        p_max,
        seed,
        samples: scans,
        periods_found,
        monotone_growth,
        note: NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_reports_period_one() {
        let r = no_periodic_points_scan(&BirationalMap::identity(2), 20, 3, 1).unwrap();
        assert_eq!(r.periods_found, vec![1, 1, 1]);
        assert!(!r.monotone_growth);
    }

    #[test]
    fn lyness_reports_period_five() {
        let f = BirationalMap::parse(&["y2", "(1+y2)/y1"], None).unwrap();
        let r = no_periodic_points_scan(&f, 20, 5, 1).unwrap();
        assert_eq!(r.periods_found, vec![5; 5]);
    }

    #[test]
    fn doubling_escapes() {
        let f = BirationalMap::parse(&["2*x1"], None).unwrap();
        let r = no_periodic_points_scan(&f, 20, 4, 9).unwrap();
        assert!(!r.periodic_point_found());
        assert!(r.monotone_growth);
        assert!((r.samples[0].last_log10[1] - r.samples[0].last_log10[0] - 2f64.log10()).abs() < 1e-9);
    }
}
