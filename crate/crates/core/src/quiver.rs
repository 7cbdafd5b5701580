//! Quivers, seed mutation, mutation-periodicity and cluster maps.
//!
//! Node indices are 0-based throughout the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{BirationalMap, RationalFunction};
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

/// Default bound for [`detect_period`].
pub const DEFAULT_MAX_PERIOD: usize = 8;

fn check_skew(b: &IntMatrix) -> Result<()> {
    if !b.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    Ok(())
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    Ok(())
}

/// Matrix mutation at node `k`.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> Result<IntMatrix> {
    check_skew(b)?;
    let n = b.rows();
    check_index(k, n)?;
    let mut out = b.clone();
    for i in 0..n {
        for j in 0..n {
            let v = if i == k || j == k {
                -b.get(i, j)
            } else {
                let (bik, bkj) = (b.get(i, k), b.get(k, j));
                let twice = bik.abs() * bkj + bik * bkj.abs();
                b.get(i, j) + twice.div_floor(&BigInt::from(2))
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `σ^{-m} B σ^m` for the cyclic shift σ: entry `(i, j)` is
/// `B[(i-m) mod N][(j-m) mod N]`.
pub fn shift_conjugate(b: &IntMatrix, m: usize) -> IntMatrix {
    let n = b.rows();
    let mut out = IntMatrix::zeros(n, n);
    if n == 0 {
        return out;
    }
    let m = m % n;
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, b.get((i + n - m) % n, (j + n - m) % n).clone());
        }
    }
    out
}

/// A quiver together with its cluster, expressed in the initial variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub matrix: IntMatrix,
    pub cluster: BirationalMap,
}

impl Seed {
    pub fn initial(b: &IntMatrix) -> Result<Self> {
        check_skew(b)?;
        Ok(Seed {
            matrix: b.clone(),
            cluster: BirationalMap::identity(b.rows()),
        })
    }

    /// Exchange relation at node `k`; every other variable is unchanged.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let n = self.matrix.rows();
        check_index(k, n)?;
        let matrix = mutate_matrix(&self.matrix, k)?;
        let vars = self.cluster.components();
        let m = self.cluster.dim_in();
        let mut pos = RationalFunction::one(m);
        let mut neg = RationalFunction::one(m);
        for j in 0..n {
            let e = self.matrix.get(k, j);
            if e.is_zero() {
                continue;
            }
            let p = e.abs().to_i64().ok_or_else(|| Error::InvalidInput("exchange exponent too large".into()))?;
            let factor = vars[j].pow(p)?;
            if e.is_positive() {
                pos = pos.mul(&factor);
            } else {
                neg = neg.mul(&factor);
            }
        }
        let xk = pos.add(&neg).div(&vars[k])?;
        let mut comps = vars.to_vec();
        comps[k] = xk;
        Ok(Seed {
            matrix,
            cluster: BirationalMap::new(m, comps)?,
        })
    }
}

/// Witness that mutating at nodes `0, …, period-1` in order returns the
/// matrix to its `period`-fold shift conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityCertificate {
    pub period: usize,
    pub sequence: Vec<usize>,
}

impl PeriodicityCertificate {
    /// Re-checks the defining identity for `b`.
    pub fn holds_for(&self, b: &IntMatrix) -> Result<bool> {
        let n = b.rows();
        if n == 0 || self.period == 0 || self.sequence != (0..self.period).map(|i| i % n).collect::<Vec<_>>() {
            return Ok(false);
        }
        let mut m = b.clone();
        for &k in &self.sequence {
            m = mutate_matrix(&m, k)?;
        }
        Ok(m == shift_conjugate(b, self.period))
    }
}

/// Smallest `m ≤ m_max` for which `B` is `m`-periodic.
pub fn detect_period(b: &IntMatrix, m_max: usize) -> Result<Option<PeriodicityCertificate>> {
    check_skew(b)?;
    let n = b.rows();
    if n == 0 {
        return Ok(None);
    }
    let mut m = b.clone();
    for period in 1..=m_max {
        m = mutate_matrix(&m, (period - 1) % n)?;
        if m == shift_conjugate(b, period) {
            return Ok(Some(PeriodicityCertificate {
                period,
                sequence: (0..period).map(|i| i % n).collect(),
            }));
        }
    }
    Ok(None)
}

/// `φ = σ^m ∘ μ_m ∘ ⋯ ∘ μ_1`.
pub fn cluster_map(b: &IntMatrix, cert: &PeriodicityCertificate) -> Result<BirationalMap> {
    if !cert.holds_for(b)? {
        return Err(Error::InvalidCertificate);
    }
    let n = b.rows();
    let mut seed = Seed::initial(b)?;
    for &k in &cert.sequence {
        seed = seed.mutate(k)?;
    }
    let comps = (0..n)
        .map(|i| seed.cluster.component((i + cert.period) % n).clone())
        .collect();
    BirationalMap::new(n, comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn somos5() -> IntMatrix {
        IntMatrix::from_rows(&[
            [0, 1, -1, -1, 1],
            [-1, 0, 2, 0, -1],
            [1, -2, 0, 2, -1],
            [1, 0, -2, 0, 1],
            [-1, 1, 1, -1, 0],
        ])
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let z = IntMatrix::zeros(3, 3);
        for k in 0..3 {
            assert_eq!(mutate_matrix(&z, k).unwrap(), z);
        }
    }

    #[test]
    fn involution_and_range() {
        let b = somos5();
        for k in 0..5 {
            assert_eq!(mutate_matrix(&mutate_matrix(&b, k).unwrap(), k).unwrap(), b);
        }
        assert_eq!(mutate_matrix(&b, 5), Err(Error::IndexOutOfRange { index: 5, len: 5 }));
    }

    #[test]
    fn empty_exchange_products() {
        let s = Seed::initial(&IntMatrix::zeros(2, 2)).unwrap().mutate(0).unwrap();
        assert_eq!(s.cluster.to_strings(), vec!["2/x1", "x2"]);
    }

    #[test]
    fn somos5_exchange_and_period() {
        let b = somos5();
        let s = Seed::initial(&b).unwrap().mutate(0).unwrap();
        assert_eq!(s.cluster.component(0).to_string(), "(x2*x5 + x3*x4)/x1");
        let back = s.mutate(0).unwrap();
        assert_eq!(back, Seed::initial(&b).unwrap());
        let cert = detect_period(&b, 8).unwrap().unwrap();
        assert_eq!(cert.period, 1);
        let phi = cluster_map(&b, &cert).unwrap();
        assert_eq!(phi.to_strings(), vec!["x2", "x3", "x4", "x5", "(x2*x5 + x3*x4)/x1"]);
    }

    #[test]
    fn bad_certificate_rejected() {
        let cert = PeriodicityCertificate {
            period: 2,
            sequence: vec![1, 0],
        };
        assert_eq!(cluster_map(&somos5(), &cert), Err(Error::InvalidCertificate));
    }
}
