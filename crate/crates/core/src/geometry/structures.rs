use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{MonomialMap, Scalar};
use crate::error::{Error, Result};
use crate::lattice::rational::RatMatrix;
use crate::lattice::{darboux_basis, kernel_lattice, saturation_index, IntMatrix, LatticeBasis};

/// `ω = Σ_{i<j} b_ij dx_i/x_i ∧ dx_j/x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresymplecticForm {
    pub b: IntMatrix,
    pub rank: usize,
}

impl PresymplecticForm {
    pub fn new(b: IntMatrix) -> Result<Self> {
        if !b.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        let rank = b.rank();
        Ok(PresymplecticForm { b, rank })
    }

    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    /// `W(x)_ij = b_ij / (x_i x_j)`.
    pub fn matrix_at<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
        log_canonical(&self.b, x, true)
    }
}

/// `{x_i, x_j} = c_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    pub c: IntMatrix,
    pub kernel: LatticeBasis,
    pub corank: usize,
}

impl PoissonStructure {
    pub fn new(c: IntMatrix) -> Result<Self> {
        if !c.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        let kernel = kernel_lattice(&c);
        let corank = kernel.dim();
        Ok(PoissonStructure { c, kernel, corank })
    }

    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    pub fn rank(&self) -> usize {
        self.dim() - self.corank
    }

    /// `Π(x)_ij = c_ij x_i x_j`.
    pub fn matrix_at<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
        log_canonical(&self.c, x, false)
    }
}

fn log_canonical<S: Scalar>(m: &IntMatrix, x: &[S], divide: bool) -> Vec<Vec<S>> {
    let ctx = x[0].context();
    let n = m.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = m.get(i, j);
                    if e.is_zero() {
                        return S::zero_with(&ctx);
                    }
                    let c = S::from_rational(&BigRational::from_integer(e.clone()), &ctx);
                    let xx = x[i].clone() * x[j].clone();
                    if divide {
                        c / xx
                    } else {
                        c * xx
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmersionKind {
    /// Leaves are the null leaves of a presymplectic form.
    Null,
    /// Leaves are the symplectic leaves of a Poisson structure.
    Casimir,
    /// A projection between the bases of two nested foliations.
    Projection,
}

/// A monomial submersion whose fibres are the leaves of a foliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submersion {
    pub map: MonomialMap,
    pub kind: SubmersionKind,
    /// The matrix the foliation was built from, if any.
    pub source: Option<IntMatrix>,
    /// Darboux weights `λ_m` when the rows are a Darboux basis.
    pub weights: Option<Vec<BigRational>>,
    /// Index of the exponent lattice in its saturation (1 when saturated).
    pub saturation_index: BigInt,
}

fn from_basis(basis: &LatticeBasis) -> Result<MonomialMap> {
    if basis.is_empty() {
        return Ok(MonomialMap::empty(basis.ambient_dim));
    }
    MonomialMap::new(basis.matrix())
}

/// Submersion onto the space of null leaves: exponents form a Darboux basis
/// of the image lattice of `B`.
pub fn null_submersion(omega: &PresymplecticForm) -> Result<Submersion> {
    let d = darboux_basis(&omega.b)?;
    let map = from_basis(&d.basis)?;
    let saturation_index = index_of(&map);
    Ok(Submersion {
        map,
        kind: SubmersionKind::Null,
        source: Some(omega.b.clone()),
        weights: Some(d.weights),
        saturation_index,
    })
}

/// Submersion onto the space of symplectic leaves: exponents form a basis
/// of the kernel lattice of `C`, so every component is a Casimir.
pub fn casimir_submersion(p: &PoissonStructure) -> Result<Submersion> {
    let map = from_basis(&p.kernel)?;
    let saturation_index = index_of(&map);
    Ok(Submersion {
        map,
        kind: SubmersionKind::Casimir,
        source: Some(p.c.clone()),
        weights: None,
        saturation_index,
    })
}

fn index_of(map: &MonomialMap) -> BigInt {
    if map.dim_out() == 0 {
        BigInt::from(1)
    } else {
        saturation_index(map.exponents())
    }
}

impl Submersion {
    pub fn from_map(map: MonomialMap, kind: SubmersionKind) -> Self {
        let saturation_index = index_of(&map);
        Submersion {
            map,
            kind,
            source: None,
            weights: None,
            saturation_index,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.map.dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.map.dim_out()
    }

    pub fn lattice(&self) -> LatticeBasis {
        LatticeBasis {
            ambient_dim: self.map.dim_in(),
            vectors: self.map.exponents().to_rows(),
            saturated: self.saturation_index == BigInt::from(1),
        }
    }

    /// The same foliation with the exponent basis replaced by `rows`, which
    /// must generate exactly the same lattice.
    pub fn aligned(&self, rows: &[Vec<i64>]) -> Result<Submersion> {
        let map = MonomialMap::from_rows(rows, self.dim_in())?;
        let new = Submersion {
            map,
            kind: self.kind,
            source: self.source.clone(),
            weights: None,
            saturation_index: BigInt::from(0),
        };
        if !new.lattice().same_lattice(&self.lattice()) {
            return Err(Error::InvalidInput(
                "aligned exponents generate a different lattice".into(),
            ));
        }
        Ok(Submersion {
            saturation_index: self.saturation_index.clone(),
            ..new
        })
    }

    /// Whether the fibres are single points, i.e. there is nothing to reduce.
    pub fn is_trivial(&self) -> bool {
        self.dim_out() == self.dim_in()
    }

    /// Weighted reconstruction `Σ λ_m (u_{2m-1} u_{2m}ᵀ - u_{2m} u_{2m-1}ᵀ)`.
    pub fn darboux_reconstruction(&self) -> Option<RatMatrix> {
        let weights = self.weights.as_ref()?;
        let rows = self.map.rows_i64();
        let n = self.dim_in();
        let mut out = RatMatrix::zeros(n, n);
        for (m, lambda) in weights.iter().enumerate() {
            let (a, b) = (&rows[2 * m], &rows[2 * m + 1]);
            for i in 0..n {
                for j in 0..n {
                    let w = a[i] * b[j] - b[i] * a[j];
                    if w != 0 {
                        out.data[i][j] += lambda * BigRational::from_integer(w.into());
                    }
                }
            }
        }
        Some(out)
    }
}

/// Integer vector with small entries, as used for exponents.
pub(crate) fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|e| {
            e.to_i64()
                .ok_or_else(|| Error::InvalidInput(format!("exponent {e} does not fit in 64 bits")))
        })
        .collect()
}
