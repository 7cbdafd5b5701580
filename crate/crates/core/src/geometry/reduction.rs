use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::structures::{to_i64_vec, Submersion, SubmersionKind};
use crate::algebra::{BirationalMap, LaurentPoly, MonomialMap, RationalFunction};
use crate::error::{Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::lattice::rational::RatMatrix;
use crate::lattice::{solve_in_lattice, sublattice_subset, IntMatrix};

/// Solves `v = Σ c_i u_i` for the rows of a fixed exponent matrix.
struct FibreCoordinates {
    rows: Vec<Vec<i64>>,
    right_inverse: Option<RatMatrix>,
}

impl FibreCoordinates {
    fn new(pi: &Submersion) -> Self {
        let rows = pi.map.rows_i64();
        let right_inverse = (!rows.is_empty()).then(|| {
            let u = pi.map.exponents().to_rational();
            let gram = u.mul(&u.transpose()).inverse().expect("independent rows");
            u.transpose().mul(&gram)
        });
        FibreCoordinates { rows, right_inverse }
    }

    fn solve(&self, v: &[i64]) -> Option<Vec<i64>> {
        let Some(r) = &self.right_inverse else {
            return v.iter().all(|&k| k == 0).then(Vec::new);
        };
        let k = self.rows.len();
        let mut c = Vec::with_capacity(k);
        for j in 0..k {
            let mut s = BigRational::from_integer(0.into());
            for (i, &vi) in v.iter().enumerate() {
                if vi != 0 {
                    s += &r.data[i][j] * BigRational::from_integer(vi.into());
                }
            }
            if !s.is_integer() {
                return None;
            }
            c.push(num_traits::ToPrimitive::to_i64(&s.to_integer())?);
        }
        // The least-squares solve only certifies membership once re-expanded.
        let back: Vec<i64> = (0..v.len())
            .map(|i| (0..k).map(|j| c[j] * self.rows[j][i]).sum())
            .collect();
        (back == v).then_some(c)
    }
}

/// Expresses a fibre-constant `F` as a rational function of the submersion
/// components `y_i = x^{u_i}`.
pub fn rewrite_in_fiber_coordinates(f: &RationalFunction, pi: &Submersion) -> Result<RationalFunction> {
    rewrite_with(f, &FibreCoordinates::new(pi), pi.dim_out())
}

fn rewrite_with(f: &RationalFunction, coords: &FibreCoordinates, r: usize) -> Result<RationalFunction> {
    let (num, den) = (f.numerator(), f.denominator());
    let (base, _) = den.leading().expect("denominator is nonzero");
    let base = base.clone();
    let convert = |p: &LaurentPoly| -> Result<LaurentPoly> {
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            let shifted: Vec<i64> = e.iter().zip(&base).map(|(a, b)| a - b).collect();
            let y = coords.solve(&shifted).ok_or(Error::NotFiberConstant)?;
            terms.push((y, c.clone()));
        }
        Ok(LaurentPoly::from_terms(r, terms))
    };
    let yn = convert(num)?;
    let yd = convert(den)?;
    RationalFunction::new(yn, yd)
}

/// `(ψ, π)` with `π ∘ φ = ψ ∘ π`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSystem {
    pub psi: BirationalMap,
    pub pi: Submersion,
    /// The defining identity was checked symbolically.
    pub verified: bool,
    /// The submersion has point fibres, so `ψ` is `φ` in other coordinates.
    pub not_a_reduction: bool,
}

impl ReducedSystem {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReducedSystemRepr::from(self)).expect("plain data")
    }
}

/// Wire format of a reduced system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSystemRepr {
    pub schema: String,
    pub psi: Vec<String>,
    pub pi: SubmersionRepr,
    pub verified: bool,
    #[serde(default)]
    pub not_a_reduction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmersionRepr {
    pub exponents: Vec<Vec<i64>>,
    pub kind: SubmersionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl From<&Submersion> for SubmersionRepr {
    fn from(s: &Submersion) -> Self {
        SubmersionRepr {
            exponents: s.map.rows_i64(),
            kind: s.kind,
            weights: s.weights.as_ref().map(|w| w.iter().map(ToString::to_string).collect()),
        }
    }
}

impl SubmersionRepr {
    pub fn to_submersion(&self, dim_in: usize) -> Result<Submersion> {
        let map = MonomialMap::from_rows(&self.exponents, dim_in)?;
        let mut s = Submersion::from_map(map, self.kind);
        if let Some(w) = &self.weights {
            let parsed = w
                .iter()
                .map(|x| x.parse::<BigRational>().map_err(|e| Error::InvalidInput(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            s.weights = Some(parsed);
        }
        Ok(s)
    }
}

impl From<&ReducedSystem> for ReducedSystemRepr {
    fn from(r: &ReducedSystem) -> Self {
        ReducedSystemRepr {
            schema: SCHEMA_VERSION.into(),
            psi: r.psi.to_strings(),
            pi: (&r.pi).into(),
            verified: r.verified,
            not_a_reduction: r.not_a_reduction,
        }
    }
}

/// Computes `ψ_i` from `y_i ∘ φ` and verifies `π ∘ φ = ψ ∘ π` symbolically.
pub fn derive_reduced_map(phi: &BirationalMap, pi: &Submersion) -> Result<ReducedSystem> {
    if phi.dim_in() != pi.dim_in() || phi.dim_out() != pi.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "map and submersion",
            expected: pi.dim_in(),
            found: phi.dim_in(),
        });
    }
    let coords = FibreCoordinates::new(pi);
    let r = pi.dim_out();
    let pi_map = pi.map.to_birational();
    let lhs = pi_map.compose(phi)?;
    let mut comps = Vec::with_capacity(r);
    for (i, f) in lhs.components().iter().enumerate() {
        let psi_i = rewrite_with(f, &coords, r).map_err(|e| match e {
            Error::NotFiberConstant => Error::NotReducible { component: i },
            other => other,
        })?;
        comps.push(psi_i);
    }
    let psi = BirationalMap::new(r, comps)?.with_var("y");
    let rhs = psi.compose(&pi_map)?;
    Ok(ReducedSystem {
        verified: rhs == lhs,
        psi,
        pi: pi.clone(),
        not_a_reduction: pi.is_trivial(),
    })
}

/// Projection `p` with `p ∘ π₂ = π₁`, when every leaf of `π₂` lies in a leaf
/// of `π₁` (equivalently, the exponent lattice of `π₁` sits inside that of
/// `π₂`).
pub fn check_subfoliation(pi1: &Submersion, pi2: &Submersion) -> Result<Option<MonomialMap>> {
    let (l1, l2) = (pi1.lattice(), pi2.lattice());
    if !sublattice_subset(&l1, &l2)? {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(l1.dim());
    for u in &l1.vectors {
        match solve_in_lattice(&l2, u) {
            Some(c) => rows.push(to_i64_vec(&c)?),
            None => return Ok(None),
        }
    }
    let p = MonomialMap::from_rows(&rows, pi2.dim_out())?;
    debug_assert_eq!(p.compose(&pi2.map)?.exponents(), pi1.map.exponents());
    Ok(Some(p))
}

/// Submersions ordered from coarsest to finest foliation, with
/// `projections[i] ∘ levels[i+1] = levels[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub levels: Vec<Submersion>,
    pub projections: Vec<MonomialMap>,
    /// Position of each level in the caller's input list.
    pub order: Vec<usize>,
}

pub fn build_flag(submersions: &[Submersion]) -> Result<Flag> {
    if let Some(first) = submersions.first() {
        for s in submersions {
            if s.dim_in() != first.dim_in() {
                return Err(Error::DimensionMismatch {
                    context: "flag members",
                    expected: first.dim_in(),
                    found: s.dim_in(),
                });
            }
        }
    }
    let mut order: Vec<usize> = (0..submersions.len()).collect();
    order.sort_by_key(|&i| submersions[i].dim_out());
    let mut projections = Vec::new();
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        match check_subfoliation(&submersions[a], &submersions[b])? {
            Some(p) => projections.push(p),
            None => return Err(Error::NotAChain { first: a, second: b }),
        }
    }
    Ok(Flag {
        levels: order.iter().map(|&i| submersions[i].clone()).collect(),
        projections,
        order,
    })
}

/// `(ψ₁, p)` as a reduced system of `ψ₂`, given `p ∘ π₂ = π₁`.
pub fn chained_reduction(outer: &ReducedSystem, inner: &ReducedSystem, p: &MonomialMap) -> Result<ReducedSystem> {
    if p.compose(&inner.pi.map)?.exponents() != outer.pi.map.exponents() {
        return Err(Error::VerificationFailed(
            "projection does not intertwine the two submersions".into(),
        ));
    }
    let pb = p.to_birational().with_var("y");
    let lhs = pb.compose(&inner.psi)?;
    let rhs = outer.psi.compose(&pb)?;
    if lhs != rhs {
        return Err(Error::VerificationFailed(format!(
            "p∘ψ₂ = {lhs} differs from ψ₁∘p = {rhs}"
        )));
    }
    Ok(ReducedSystem {
        psi: outer.psi.clone(),
        pi: Submersion::from_map(p.clone(), SubmersionKind::Projection),
        verified: true,
        not_a_reduction: p.dim_out() == p.dim_in(),
    })
}

/// Exponent rows of a matrix of small integers.
pub fn exponent_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_rows().iter().map(|r| to_i64_vec(r)).collect()
}
