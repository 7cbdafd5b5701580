//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Lattice bases
//! returned by [`kernel_lattice`] and [`image_lattice`] are saturated and
//! normalised to Hermite normal form, so two calls on equal inputs always
//! produce identical bases.

mod darboux;
mod normal_form;
pub mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use darboux::{darboux_basis, skew_normal_form, DarbouxBasis};
pub use normal_form::{hermite_normal_form, smith_normal_form, SmithForm};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from a row-major entry list.
    pub fn with_shape(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows. Panics on ragged input; meant for literals.
    pub fn from_rows<T, R>(rows: &[R]) -> Self
    where
        T: Into<BigInt> + Clone,
        R: AsRef<[T]>,
    {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix literal");
            entries.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose rows are the given vectors, all of length `cols`.
    pub fn from_vectors(cols: usize, vectors: &[Vec<BigInt>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            if v.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "row vector",
                    expected: cols,
                    found: v.len(),
                });
            }
            entries.extend(v.iter().cloned());
        }
        Ok(IntMatrix {
            rows: vectors.len(),
            cols,
            entries,
        })
    }

    /// Skew-symmetric matrix from its strict upper triangle, listed row by row.
    pub fn skew_from_upper<T: Into<BigInt> + Clone>(n: usize, upper: &[T]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch {
                context: "strict upper triangle",
                expected: n * n.saturating_sub(1) / 2,
                found: upper.len(),
            });
        }
        let mut m = Self::zeros(n, n);
        let mut it = upper.iter().cloned().map(Into::into);
        for i in 0..n {
            for j in (i + 1)..n {
                let v: BigInt = it.next().expect("length checked");
                m.set(j, i, -&v);
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && ((i + 1)..self.cols).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }

    /// Rows stacked on top of `other`'s rows.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::DimensionMismatch {
                context: "vertical stack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols,
            entries,
        })
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        let (h, _) = hermite_normal_form(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|e| !e.is_zero())).count()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "determinant",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn to_rational(&self) -> rational::RatMatrix {
        rational::RatMatrix::from_int(self)
    }

    /// Flattens the strict upper triangle of a square matrix, row by row.
    pub fn upper_triangle(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", e.to_string(), width = width)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<IntegerRepr>>,
}

/// Integers travel as decimal strings; bare JSON numbers are accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntegerRepr {
    Text(String),
    Number(i64),
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            schema: Some(crate::io::SCHEMA_VERSION.to_string()),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|e| IntegerRepr::Text(e.to_string())).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                repr.rows,
                repr.entries.len()
            )));
        }
        let mut entries = Vec::with_capacity(repr.rows * repr.cols);
        for row in repr.entries {
            if row.len() != repr.cols {
                return Err(D::Error::custom(format!(
                    "expected {} columns, found {}",
                    repr.cols,
                    row.len()
                )));
            }
            for e in row {
                entries.push(match e {
                    IntegerRepr::Number(n) => BigInt::from(n),
                    IntegerRepr::Text(t) => t
                        .trim()
                        .parse::<BigInt>()
                        .map_err(|_| D::Error::custom(format!("not an integer: {t:?}")))?,
                });
            }
        }
        Ok(IntMatrix {
            rows: repr.rows,
            cols: repr.cols,
            entries,
        })
    }
}

/// A basis of a sublattice of ℤ^n, one vector per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<BigInt>>,
    pub saturated: bool,
}

impl LatticeBasis {
    pub fn empty(ambient_dim: usize) -> Self {
        LatticeBasis {
            ambient_dim,
            vectors: Vec::new(),
            saturated: true,
        }
    }

    pub fn standard(n: usize) -> Self {
        LatticeBasis {
            ambient_dim: n,
            vectors: IntMatrix::identity(n).to_rows(),
            saturated: true,
        }
    }

    /// Wraps explicit vectors. Fails if they are dependent over ℚ; the
    /// saturation flag is computed, not trusted.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = IntMatrix::from_vectors(ambient_dim, &vectors)?;
        if m.rank() != vectors.len() {
            return Err(Error::InvalidInput(
                "lattice basis vectors are linearly dependent".into(),
            ));
        }
        let saturated = saturation_index(&m).is_one();
        Ok(LatticeBasis {
            ambient_dim,
            vectors,
            saturated,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_vectors(self.ambient_dim, &self.vectors).expect("basis vectors have ambient length")
    }

    /// Same lattice, basis rewritten in Hermite normal form.
    pub fn normalized(&self) -> Self {
        if self.vectors.is_empty() {
            return self.clone();
        }
        let (h, _) = hermite_normal_form(&self.matrix());
        let vectors = h
            .to_rows()
            .into_iter()
            .filter(|r| r.iter().any(|e| !e.is_zero()))
            .collect();
        LatticeBasis {
            ambient_dim: self.ambient_dim,
            vectors,
            saturated: self.saturated,
        }
    }

    /// True when both bases generate the same ℤ-module.
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.normalized().vectors == other.normalized().vectors
    }
}

/// Index of the row lattice of `m` inside its saturation (ℚ-span ∩ ℤ^n):
/// the product of the nonzero Smith invariants.
pub fn saturation_index(m: &IntMatrix) -> BigInt {
    let snf = smith_normal_form(m);
    let mut index = BigInt::one();
    for i in 0..m.rows().min(m.cols()) {
        let d = snf.s.get(i, i);
        if !d.is_zero() {
            index *= d.abs();
        }
    }
    index
}

/// Saturated basis of `{u ∈ ℤ^n : M·u = 0}`, in Hermite normal form.
pub fn kernel_lattice(m: &IntMatrix) -> LatticeBasis {
    let n = m.cols();
    let (h, u) = hermite_normal_form(&m.transpose());
    let rank = (0..h.rows())
        .filter(|&i| h.row(i).iter().any(|e| !e.is_zero()))
        .count();
    let vectors: Vec<Vec<BigInt>> = (rank..n).map(|i| u.row(i).to_vec()).collect();
    LatticeBasis {
        ambient_dim: n,
        vectors,
        saturated: true,
    }
    .normalized()
}

/// Saturated basis of (column space of M) ∩ ℤ^rows, in Hermite normal form.
pub fn image_lattice(m: &IntMatrix) -> LatticeBasis {
    // colspace(M) ∩ ℤ^r is the integer kernel of a basis of ker(Mᵀ).
    let left_kernel = kernel_lattice(&m.transpose());
    let constraints = if left_kernel.is_empty() {
        IntMatrix::zeros(0, m.rows())
    } else {
        left_kernel.matrix()
    };
    kernel_lattice(&constraints)
}

fn in_rational_span(basis: &LatticeBasis, v: &[BigInt]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let mut rows = basis.vectors.clone();
    rows.push(v.to_vec());
    let m = IntMatrix::from_vectors(basis.ambient_dim, &rows).expect("lengths checked");
    m.rank() == basis.dim()
}

/// Whether every vector of `a` lies in the ℚ-span of `b`.
///
/// Both bases are expected to be saturated, in which case this is also the
/// lattice inclusion test.
pub fn sublattice_subset(a: &LatticeBasis, b: &LatticeBasis) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            context: "sublattice test",
            expected: b.ambient_dim,
            found: a.ambient_dim,
        });
    }
    Ok(a.vectors.iter().all(|v| in_rational_span(b, v)))
}

/// Integer coefficients `c` with `Σ cᵢ uᵢ = v`, or `None` when `v` is not in
/// the lattice (or has the wrong length).
pub fn solve_in_lattice(basis: &LatticeBasis, v: &[BigInt]) -> Option<Vec<BigInt>> {
    if v.len() != basis.ambient_dim {
        return None;
    }
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let a_t = basis.matrix().transpose().to_rational();
    let rhs: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
    let coeffs = a_t.solve(&rhs)?;
    coeffs
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn somos5_b() -> IntMatrix {
        IntMatrix::from_rows(&[
            [0, 1, -1, -1, 1],
            [-1, 0, 2, 0, -1],
            [1, -2, 0, 2, -1],
            [1, 0, -2, 0, 1],
            [-1, 1, 1, -1, 0],
        ])
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let k = kernel_lattice(&IntMatrix::zeros(3, 3));
        assert_eq!(k, LatticeBasis::standard(3));
    }

    #[test]
    fn image_of_zero_matrix_is_empty() {
        assert!(image_lattice(&IntMatrix::zeros(4, 4)).is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let b = somos5_b();
        let k = kernel_lattice(&b);
        assert_eq!(k.dim(), 3);
        for v in &k.vectors {
            assert!(b.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        assert!(saturation_index(&k.matrix()).is_one());
    }

    #[test]
    fn somos5_image_contains_reduction_exponents() {
        let img = image_lattice(&somos5_b());
        assert_eq!(img.dim(), 2);
        assert!(img.saturated);
        for u in [bi(&[1, -1, -1, 1, 0]), bi(&[0, 1, -1, -1, 1])] {
            assert!(in_rational_span(&img, &u));
            assert!(solve_in_lattice(&img, &u).is_some());
        }
    }

    #[test]
    fn solve_in_lattice_reexpands() {
        let img = image_lattice(&somos5_b());
        let (u1, u2) = (&img.vectors[0], &img.vectors[1]);
        let v: Vec<BigInt> = u1.iter().zip(u2).map(|(a, b)| a + b * 2).collect();
        let c = solve_in_lattice(&img, &v).unwrap();
        assert_eq!(c, bi(&[1, 2]));
        assert_eq!(solve_in_lattice(&img, &bi(&[0, 0, 0, 0, 0])), Some(bi(&[0, 0])));
        assert_eq!(solve_in_lattice(&img, u1), Some(bi(&[1, 0])));
        assert_eq!(solve_in_lattice(&img, &bi(&[1, 0, 0, 0, 0])), None);
    }

    #[test]
    fn subset_checks_dimension() {
        let a = LatticeBasis::standard(3);
        let b = LatticeBasis::standard(4);
        assert!(sublattice_subset(&a, &b).is_err());
        assert!(sublattice_subset(&a, &a).unwrap());
    }

    #[test]
    fn from_vectors_detects_unsaturated_lattice() {
        let l = LatticeBasis::from_vectors(2, vec![bi(&[2, 0])]).unwrap();
        assert!(!l.saturated);
        assert!(LatticeBasis::from_vectors(2, vec![bi(&[1, 1]), bi(&[2, 2])]).is_err());
    }

    #[test]
    fn json_uses_decimal_strings() {
        let m = IntMatrix::from_rows(&[[0, -3], [3, 0]]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"-3\""));
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let loose: IntMatrix =
            serde_json::from_str(r#"{"rows":1,"cols":2,"entries":[[1,"99999999999999999999999"]]}"#).unwrap();
        assert_eq!(loose.get(0, 1).to_string(), "99999999999999999999999");
    }

    #[test]
    fn determinant_matches_hand_values() {
        assert_eq!(IntMatrix::from_rows(&[[2, 4], [1, 3]]).determinant().unwrap(), BigInt::from(2));
        assert_eq!(IntMatrix::identity(4).determinant().unwrap(), BigInt::one());
        assert!(somos5_b().determinant().unwrap().is_zero());
    }
}
