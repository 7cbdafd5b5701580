//! Small dense matrices over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![vec![BigRational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(BigRational::from_integer).collect())
                .collect(),
        }
    }

    pub fn from_rows(data: Vec<Vec<BigRational>>, cols: usize) -> Self {
        RatMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "rational matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if !rhs.data[k][j].is_zero() {
                        out.data[i][j] += a * &rhs.data[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for e in a[r].iter_mut() {
                *e *= &inv;
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *e -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (RatMatrix::from_rows(a, self.cols), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Unique solution of `self · x = b`, or `None` if inconsistent or
    /// underdetermined.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let aug = RatMatrix::from_rows(
            self.data
                .iter()
                .zip(b)
                .map(|(row, bi)| {
                    let mut r = row.clone();
                    r.push(bi.clone());
                    r
                })
                .collect(),
            self.cols + 1,
        );
        let (rref, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) || pivots.len() != self.cols {
            return None;
        }
        Some((0..self.cols).map(|i| rref.data[i][self.cols].clone()).collect())
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.data.clone();
        for (i, row) in aug.iter_mut().enumerate() {
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
        }
        let (rref, pivots) = RatMatrix::from_rows(aug, 2 * n).rref();
        if pivots.iter().filter(|&&p| p < n).count() != n {
            return None;
        }
        Some(RatMatrix::from_rows(
            rref.data.into_iter().map(|r| r[n..].to_vec()).collect(),
            n,
        ))
    }

    /// Basis of `{x : self · x = 0}` over ℚ.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.data[r][f].clone();
                }
                v
            })
            .collect()
    }

    /// Converts to an integer matrix when every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for e in self.data.iter().flatten() {
            if !e.is_integer() {
                return None;
            }
            entries.push(e.to_integer());
        }
        IntMatrix::with_shape(self.rows, self.cols, entries).ok()
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (sign preserved). The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let d = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|e| (e * &d).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|e| e / &g).collect()
}
