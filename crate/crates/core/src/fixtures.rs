//! Named example matrices and exponent sets shipped as a regression corpus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FixtureValue {
    Matrix { matrix: IntMatrix },
    MatrixList { matrices: Vec<IntMatrix> },
    /// Rows are exponent vectors of Laurent monomials.
    Exponents { rows: Vec<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    #[serde(flatten)]
    pub value: FixtureValue,
}

/// The 5-node quiver family; 1-periodic when `r = s`, 2-periodic otherwise.
pub fn five_node(r: i64, s: i64) -> IntMatrix {
    IntMatrix::from_rows(&[
        [0, r, -1, -1, s],
        [-r, 0, r + s, r - 1, -1],
        [1, -r - s, 0, r + s, -1],
        [1, 1 - r, -r - s, 0, r],
        [-s, 1, 1, -r, 0],
    ])
}

pub fn somos5() -> IntMatrix {
    five_node(1, 1)
}

/// Rank-2 seven-node quiver whose cluster map is a Somos-7-like recurrence.
pub fn seven_node() -> IntMatrix {
    IntMatrix::from_rows(&[
        [0, 1, 0, -1, -1, 0, 1],
        [-1, 0, 1, 1, 0, -1, 0],
        [0, -1, 0, 1, 1, 0, -1],
        [1, -1, -1, 0, 1, 1, -1],
        [1, 0, -1, -1, 0, 1, 0],
        [0, 1, 0, -1, -1, 0, 1],
        [-1, 0, 1, 1, 0, -1, 0],
    ])
}

/// `c_ij = j - i`.
pub fn somos5_poisson() -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| j - i).collect()).collect();
    IntMatrix::from_rows(&rows)
}

pub fn seven_node_c1() -> IntMatrix {
    IntMatrix::skew_from_upper(7, &[1, 1, 2, 3, 3, 4, 1, 1, 2, 3, 3, 1, 1, 2, 3, 1, 1, 2, 1, 1, 1])
        .expect("21 entries")
}

pub fn seven_node_c2() -> IntMatrix {
    IntMatrix::skew_from_upper(7, &[1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 1, -1, 0, 1, 1, -1, 0, 1, -1, 1])
        .expect("21 entries")
}

pub fn somos5_y() -> Vec<Vec<i64>> {
    vec![vec![1, -1, -1, 1, 0], vec![0, 1, -1, -1, 1], vec![0, 0, 1, -2, 1]]
}

pub fn seven_node_y() -> Vec<Vec<i64>> {
    vec![
        vec![1, 0, -1, -1, 0, 1, 0],
        vec![0, 1, 0, -1, -1, 0, 1],
        vec![1, 0, 0, -2, 0, 0, 1],
        vec![1, 1, 1, 0, 0, 0, 0],
        vec![0, 1, 1, 1, 0, 0, 0],
    ]
}

pub fn fixtures() -> Vec<Fixture> {
    let m = |name: &str, description: &str, matrix: IntMatrix| Fixture {
        name: name.into(),
        description: description.into(),
        value: FixtureValue::Matrix { matrix },
    };
    let e = |name: &str, description: &str, rows: Vec<Vec<i64>>| Fixture {
        name: name.into(),
        description: description.into(),
        value: FixtureValue::Exponents { rows },
    };
    vec![
        m("somos5", "5-node quiver with r = s = 1 (Somos-5)", somos5()),
        m("five-node-1-2", "5-node quiver with r = 1, s = 2 (2-periodic)", five_node(1, 2)),
        m("seven-node", "rank-2 1-periodic 7-node quiver", seven_node()),
        m("somos5-poisson", "Poisson matrix c_ij = j - i for Somos-5", somos5_poisson()),
        Fixture {
            name: "c7-pair".into(),
            description: "Poisson matrices C1 (rank 4) and C2 (rank 2) for the 7-node quiver".into(),
            value: FixtureValue::MatrixList {
                matrices: vec![seven_node_c1(), seven_node_c2()],
            },
        },
        e("somos5-y", "y1, y2, y3 for Somos-5; (y1, y2) spans the null submersion", somos5_y()),
        e(
            "seven-node-y",
            "y1..y5 for the 7-node quiver; prefixes of length 2, 3, 5 give the three submersions",
            seven_node_y(),
        ),
    ]
}

pub fn fixture(name: &str) -> Result<Fixture> {
    fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let all = fixtures();
        assert!(!all.is_empty());
        for f in all {
            let text = serde_json::to_string(&f).unwrap();
            assert_eq!(serde_json::from_str::<Fixture>(&text).unwrap(), f);
        }
    }

    #[test]
    fn matrices_are_skew() {
        for m in [somos5(), five_node(1, 2), seven_node(), somos5_poisson(), seven_node_c1(), seven_node_c2()] {
            assert!(m.is_skew_symmetric());
        }
        assert!(fixture("nope").is_err());
    }
}
