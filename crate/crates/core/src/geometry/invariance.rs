use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::structures::{PoissonStructure, PresymplecticForm, Submersion};
use crate::algebra::{BirationalMap, RationalFunction};
use crate::error::{Error, Result};
use crate::lattice::rational::{primitive_integer_vector, RatMatrix};
use crate::lattice::{kernel_lattice, IntMatrix};
use crate::sampling::{random_point, FRESH_OFFSET};

/// Outcome of a pointwise exact check at seeded random points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub holds: bool,
    pub samples: usize,
    pub seed: u64,
    /// First point at which the identity failed, as "p/q" strings.
    pub witness: Option<Vec<String>>,
}

impl CheckReport {
    fn passed(samples: usize, seed: u64) -> Self {
        CheckReport {
            holds: true,
            samples,
            seed,
            witness: None,
        }
    }

    fn failed(samples: usize, seed: u64, point: &[BigRational]) -> Self {
        CheckReport {
            holds: false,
            samples,
            seed,
            witness: Some(point.iter().map(ToString::to_string).collect()),
        }
    }
}

type Mat = Vec<Vec<BigRational>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    out[i][j] += &a[i][t] * &b[t][j];
                }
            }
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn check_square(phi: &BirationalMap, n: usize) -> Result<()> {
    if phi.dim_in() != n || phi.dim_out() != n {
        return Err(Error::DimensionMismatch {
            context: "map and structure",
            expected: n,
            found: phi.dim_in(),
        });
    }
    Ok(())
}

/// `φ*ω = ω`, checked exactly as `Jᵀ W(φ(p)) J = W(p)` at seeded points.
pub fn check_presymplectic_invariance(
    phi: &BirationalMap,
    omega: &PresymplecticForm,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    check_square(phi, omega.dim())?;
    let jac = phi.symbolic_jacobian();
    for idx in 0..samples as u64 {
        let p = random_point(seed, idx, omega.dim());
        let j = jac.evaluate(&p)?;
        let q = phi.evaluate(&p)?;
        let pulled = mat_mul(&mat_mul(&transpose(&j), &omega.matrix_at(&q)), &j);
        if pulled != omega.matrix_at(&p) {
            return Ok(CheckReport::failed(samples, seed, &p));
        }
    }
    Ok(CheckReport::passed(samples, seed))
}

/// `φ_* P = P`, checked exactly as `J Π(p) Jᵀ = Π(φ(p))` at seeded points.
pub fn check_poisson_map(
    phi: &BirationalMap,
    p: &PoissonStructure,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    check_poisson_matrix(phi, &p.c, samples, seed, 0)
}

fn check_poisson_matrix(
    phi: &BirationalMap,
    c: &IntMatrix,
    samples: usize,
    seed: u64,
    offset: u64,
) -> Result<CheckReport> {
    let n = c.rows();
    check_square(phi, n)?;
    let structure = PoissonStructure {
        c: c.clone(),
        kernel: crate::lattice::LatticeBasis::empty(n),
        corank: 0,
    };
    let jac = phi.symbolic_jacobian();
    for idx in 0..samples as u64 {
        let p = random_point(seed, offset + idx, n);
        let j = jac.evaluate(&p)?;
        let q = phi.evaluate(&p)?;
        let pushed = mat_mul(&mat_mul(&j, &structure.matrix_at(&p)), &transpose(&j));
        if pushed != structure.matrix_at(&q) {
            return Ok(CheckReport::failed(samples, seed, &p));
        }
    }
    Ok(CheckReport::passed(samples, seed))
}

/// Basis of the invariant log-canonical Poisson structures of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonSearch {
    /// Saturated integer basis of the solution space, as skew matrices.
    pub basis: Vec<IntMatrix>,
    /// Sample points used to pin down the linear system.
    pub points_used: usize,
    /// Every basis element passed a fresh-point Poisson check.
    pub verified: bool,
    pub seed: u64,
}

/// Number of consecutive points that must leave the rank unchanged.
const STABLE_POINTS: usize = 3;
const MAX_POINTS: usize = 200;
const VERIFY_POINTS: usize = 20;

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect()
}

/// Log-canonical Poisson structures `Σ c_ij x_i x_j ∂_i∧∂_j` preserved by
/// `φ`, optionally restricted to those with `C·B = 0`.
///
/// For fixed `φ` and point `p` the identity `J Π(p) Jᵀ = Π(φ(p))` is linear
/// in the unknowns `c_ij`; points are added until the rank of the
/// accumulated system has been stable for three consecutive points.
pub fn find_invariant_poisson(
    phi: &BirationalMap,
    compatible_with: Option<&IntMatrix>,
    seed: u64,
) -> Result<PoissonSearch> {
    let n = phi.dim_in();
    check_square(phi, n)?;
    let pairs = pair_index(n);
    let unknowns = pairs.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    if let Some(b) = compatible_with {
        if b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "compatibility matrix",
                expected: n,
                found: b.rows(),
            });
        }
        // (C B)_ik = Σ_j c_ij b_jk with c_ji = -c_ij.
        for i in 0..n {
            for k in 0..n {
                let mut row = vec![BigRational::zero(); unknowns];
                for (t, &(a, bb)) in pairs.iter().enumerate() {
                    if a == i {
                        row[t] += BigRational::from_integer(b.get(bb, k).clone());
                    } else if bb == i {
                        row[t] -= BigRational::from_integer(b.get(a, k).clone());
                    }
                }
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let jac = phi.symbolic_jacobian();
    let mut rank = reduce(&mut rows, unknowns);
    let mut stable = 0;
    let mut used = 0;
    while stable < STABLE_POINTS && used < MAX_POINTS && rank < unknowns {
        let p = random_point(seed, used as u64, n);
        used += 1;
        let j = jac.evaluate(&p)?;
        let q = phi.evaluate(&p)?;
        for (i, jj) in pairs.iter().copied() {
            let mut row = vec![BigRational::zero(); unknowns];
            for (t, &(a, b)) in pairs.iter().enumerate() {
                let minor = &j[i][a] * &j[jj][b] - &j[i][b] * &j[jj][a];
                if !minor.is_zero() {
                    row[t] += &p[a] * &p[b] * minor;
                }
                if (a, b) == (i, jj) {
                    row[t] -= &q[i] * &q[jj];
                }
            }
            if row.iter().any(|e| !e.is_zero()) {
                rows.push(row);
            }
        }
        let new_rank = reduce(&mut rows, unknowns);
        if new_rank == rank {
            stable += 1;
        } else {
            stable = 0;
            rank = new_rank;
        }
    }
    let constraint_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_integer_vector(r)).collect();
    let constraints = if constraint_rows.is_empty() {
        IntMatrix::zeros(0, unknowns)
    } else {
        IntMatrix::from_vectors(unknowns, &constraint_rows)?
    };
    let solutions = kernel_lattice(&constraints);
    let basis: Vec<IntMatrix> = solutions
        .vectors
        .iter()
        .map(|v| IntMatrix::skew_from_upper(n, v))
        .collect::<Result<_>>()?;
    let mut verified = true;
    for c in &basis {
        let report = check_poisson_matrix(phi, c, VERIFY_POINTS, seed, FRESH_OFFSET)?;
        verified &= report.holds;
    }
    Ok(PoissonSearch {
        basis,
        points_used: used,
        verified,
        seed,
    })
}

/// Replaces `rows` by its nonzero RREF rows and returns the rank.
fn reduce(rows: &mut Vec<Vec<BigRational>>, cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = RatMatrix::from_rows(std::mem::take(rows), cols);
    let (r, pivots) = m.rref();
    *rows = r.data.into_iter().take(pivots.len()).collect();
    pivots.len()
}

/// Vectorization used to test membership of a matrix in a solution lattice:
/// the strict upper triangle, row by row.
pub fn upper_vector(c: &IntMatrix) -> Vec<BigInt> {
    c.upper_triangle()
}

/// `{f, g}_P = Σ_{k,l} c_kl x_k x_l ∂_k f ∂_l g`, computed symbolically.
pub fn poisson_bracket(f: &RationalFunction, g: &RationalFunction, c: &IntMatrix) -> Result<RationalFunction> {
    let n = c.rows();
    if f.nvars() != n || g.nvars() != n {
        return Err(Error::DimensionMismatch {
            context: "bracket arguments",
            expected: n,
            found: f.nvars(),
        });
    }
    let df: Vec<RationalFunction> = (0..n).map(|k| f.derivative(k)).collect();
    let dg: Vec<RationalFunction> = (0..n).map(|k| g.derivative(k)).collect();
    let mut acc = RationalFunction::zero(n);
    for k in 0..n {
        if df[k].is_zero() {
            continue;
        }
        for l in 0..n {
            let ckl = c.get(k, l);
            if ckl.is_zero() || dg[l].is_zero() {
                continue;
            }
            let xx = RationalFunction::var(n, k).mul(&RationalFunction::var(n, l));
            let term = xx
                .mul(&df[k])
                .mul(&dg[l])
                .scale(&BigRational::from_integer(ckl.clone()));
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// Whether every component of a Casimir submersion brackets to zero with
/// every coordinate function.
pub fn casimirs_vanish(pi: &Submersion, p: &PoissonStructure) -> Result<bool> {
    let n = p.dim();
    for u in pi.map.rows_i64() {
        let z = RationalFunction::monomial(&u);
        for j in 0..n {
            if !poisson_bracket(&z, &RationalFunction::var(n, j), &p.c)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `ω` vanishes on the fibres of `π` at seeded points.
///
/// The tangent space of the fibre through `p` is `{p ⊙ v : U v = 0}` for the
/// exponent matrix `U` of `π`.
pub fn check_isotropy(omega: &PresymplecticForm, pi: &Submersion, samples: usize, seed: u64) -> Result<CheckReport> {
    let n = omega.dim();
    if pi.dim_in() != n {
        return Err(Error::DimensionMismatch {
            context: "form and submersion",
            expected: n,
            found: pi.dim_in(),
        });
    }
    let directions = if pi.dim_out() == 0 {
        RatMatrix::identity(n).data
    } else {
        pi.map.exponents().to_rational().nullspace()
    };
    for idx in 0..samples as u64 {
        let p = random_point(seed, idx, n);
        let w = omega.matrix_at(&p);
        let tangent: Vec<Vec<BigRational>> = directions
            .iter()
            .map(|v| v.iter().zip(&p).map(|(a, b)| a * b).collect())
            .collect();
        for a in &tangent {
            for b in &tangent {
                let mut s = BigRational::zero();
                for i in 0..n {
                    if a[i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !w[i][j].is_zero() && !b[j].is_zero() {
                            s += &a[i] * &w[i][j] * &b[j];
                        }
                    }
                }
                if !s.is_zero() {
                    return Ok(CheckReport::failed(samples, seed, &p));
                }
            }
        }
    }
    Ok(CheckReport::passed(samples, seed))
}
