//! Darboux bases for constant skew forms.
//!
//! A skew-symmetric integer matrix `B` of rank `2k` is written as
//! `B = Σ λ_m (u_{2m-1} u_{2m}ᵀ - u_{2m} u_{2m-1}ᵀ)` with the `u_i` a saturated
//! integer basis of `Im B` and `λ_m > 0` rational. The scalars cannot always be
//! absorbed into integer vectors, so they are returned alongside.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
#[cfg(test)]
use num_traits::One;

use super::rational::{common_denominator, RatMatrix};
use super::{image_lattice, IntMatrix, LatticeBasis};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxBasis {
    /// Ordered vectors `u_1, …, u_2k`; consecutive pairs are conjugate.
    pub basis: LatticeBasis,
    /// One positive weight per pair.
    pub weights: Vec<BigRational>,
}

impl DarbouxBasis {
    pub fn half_rank(&self) -> usize {
        self.weights.len()
    }

    /// `Σ λ_m (u_{2m-1} u_{2m}ᵀ - u_{2m} u_{2m-1}ᵀ)` as a rational matrix.
    pub fn reconstruct(&self) -> RatMatrix {
        let n = self.basis.ambient_dim;
        let mut out = RatMatrix::zeros(n, n);
        for (m, lambda) in self.weights.iter().enumerate() {
            let (a, b) = (&self.basis.vectors[2 * m], &self.basis.vectors[2 * m + 1]);
            for i in 0..n {
                for j in 0..n {
                    let w = &a[i] * &b[j] - &b[i] * &a[j];
                    if !w.is_zero() {
                        out.data[i][j] += lambda * BigRational::from_integer(w);
                    }
                }
            }
        }
        out
    }
}

/// Simultaneous row/column operations on a square skew matrix, recorded in
/// `p` so that `p · original · pᵀ = a` throughout.
struct Congruence {
    a: Vec<Vec<BigInt>>,
    p: Vec<Vec<BigInt>>,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        self.p.swap(i, j);
    }

    /// index k ← k - q·l on rows and columns.
    fn sub(&mut self, k: usize, l: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src = self.a[l].clone();
        for (t, s) in self.a[k].iter_mut().zip(&src) {
            *t -= q * s;
        }
        for row in self.a.iter_mut() {
            let s = row[l].clone();
            row[k] -= q * s;
        }
        let src = self.p[l].clone();
        for (t, s) in self.p[k].iter_mut().zip(&src) {
            *t -= q * s;
        }
    }

    /// Nonzero entry above the diagonal of the trailing block with the smallest
    /// absolute value; ties go to the lexicographically first position.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let n = self.a.len();
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in (i + 1)..n {
                let e = &self.a[i][j];
                if !e.is_zero() && best.is_none_or(|(bi, bj)| e.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Congruence normal form of an integer skew matrix: returns `(P, d)` with
/// `P` unimodular and `P·A·Pᵀ` block diagonal with blocks `d_m·[[0,1],[-1,0]]`,
/// `d_m > 0`, followed by zeros.
pub fn skew_normal_form(a: &IntMatrix) -> Result<(IntMatrix, Vec<BigInt>)> {
    if !a.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = a.rows();
    let mut w = Congruence {
        a: a.to_rows(),
        p: IntMatrix::identity(n).to_rows(),
    };
    let mut blocks = Vec::new();
    let mut t = 0;
    while t + 1 < n {
        let Some((i, j)) = w.pivot(t) else {
            break;
        };
        w.swap(t, i);
        let j = if j == t { i } else { j };
        w.swap(t + 1, j);
        loop {
            if w.a[t][t + 1].is_negative() {
                w.swap(t, t + 1);
            }
            let d = w.a[t][t + 1].clone();
            for k in (t + 2)..n {
                // a[t][k] -= q·a[t][t+1] via k ← k - q·(t+1)
                let q = num_integer::Integer::div_floor(&w.a[t][k], &d);
                w.sub(k, t + 1, &q);
                // a[t+1][k] -= q·a[t+1][t]·(-1) via k ← k + q·t
                let q = num_integer::Integer::div_floor(&w.a[t + 1][k], &d);
                w.sub(k, t, &-q);
            }
            let residue = ((t + 2)..n).any(|k| !w.a[t][k].is_zero() || !w.a[t + 1][k].is_zero());
            if !residue {
                blocks.push(d);
                break;
            }
            let (i, j) = w.pivot(t).expect("residue is nonzero");
            w.swap(t, i);
            let j = if j == t { i } else { j };
            w.swap(t + 1, j);
        }
        t += 2;
    }
    let p = IntMatrix::from_vectors(n, &w.p).expect("square");
    Ok((p, blocks))
}

/// Saturated Darboux basis of `Im B`.
pub fn darboux_basis(b: &IntMatrix) -> Result<DarbouxBasis> {
    if !b.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = b.rows();
    let image = image_lattice(b);
    if image.is_empty() {
        return Ok(DarbouxBasis {
            basis: LatticeBasis::empty(n),
            weights: Vec::new(),
        });
    }
    // Restrict B to the image lattice: B = Uᵀ Ω U with Ω = Rᵀ B R for any
    // right inverse R of U.
    let u = image.matrix().to_rational();
    let gram_inv = u
        .mul(&u.transpose())
        .inverse()
        .expect("basis rows are independent");
    let right_inv = u.transpose().mul(&gram_inv);
    let omega = right_inv.transpose().mul(&b.to_rational()).mul(&right_inv);
    let denom = common_denominator(omega.data.iter().flatten());
    let scaled = RatMatrix::from_rows(
        omega
            .data
            .iter()
            .map(|r| r.iter().map(|e| e * BigRational::from_integer(denom.clone())).collect())
            .collect(),
        omega.cols,
    )
    .to_int()
    .expect("denominators cleared");
    let (p, blocks) = skew_normal_form(&scaled)?;
    // Uᵀ Ω U = U'ᵀ diag(d/D) U' with U' = P⁻ᵀ U.
    let p_inv_t = p
        .to_rational()
        .inverse()
        .expect("unimodular")
        .transpose()
        .to_int()
        .expect("inverse of a unimodular matrix is integral");
    let new_basis = p_inv_t.mul(&image.matrix())?;
    let weights = blocks
        .iter()
        .map(|d| BigRational::new(d.clone(), denom.clone()))
        .collect();
    let vectors = new_basis.to_rows().into_iter().take(2 * blocks.len()).collect();
    Ok(DarbouxBasis {
        basis: LatticeBasis {
            ambient_dim: n,
            vectors,
            saturated: true,
        },
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_symplectic_pair() {
        let b = IntMatrix::from_rows(&[[0, 1], [-1, 0]]);
        let d = darboux_basis(&b).unwrap();
        assert_eq!(d.basis.vectors, IntMatrix::identity(2).to_rows());
        assert_eq!(d.weights, vec![BigRational::one()]);
    }

    #[test]
    fn zero_form_has_empty_basis() {
        let d = darboux_basis(&IntMatrix::zeros(3, 3)).unwrap();
        assert!(d.basis.is_empty());
        assert!(d.weights.is_empty());
    }

    #[test]
    fn rejects_non_skew() {
        assert_eq!(
            darboux_basis(&IntMatrix::from_rows(&[[0, 1], [1, 0]])),
            Err(Error::NotSkewSymmetric)
        );
    }

    #[test]
    fn skew_normal_form_is_a_congruence() {
        let a = IntMatrix::from_rows(&[[0, 4, 6, 0], [-4, 0, 2, 2], [-6, -2, 0, 8], [0, -2, -8, 0]]);
        let (p, blocks) = skew_normal_form(&a).unwrap();
        let out = p.mul(&a).unwrap().mul(&p.transpose()).unwrap();
        let mut expected = IntMatrix::zeros(4, 4);
        for (m, d) in blocks.iter().enumerate() {
            expected.set(2 * m, 2 * m + 1, d.clone());
            expected.set(2 * m + 1, 2 * m, -d);
        }
        assert_eq!(out, expected);
        assert!(p.determinant().unwrap().abs().is_one());
    }

    #[test]
    fn scaled_form_keeps_weight() {
        let b = IntMatrix::from_rows(&[[0, 3], [-3, 0]]);
        let d = darboux_basis(&b).unwrap();
        assert_eq!(d.reconstruct(), b.to_rational());
        assert_eq!(d.weights, vec![BigRational::from_integer(3.into())]);
    }
}
