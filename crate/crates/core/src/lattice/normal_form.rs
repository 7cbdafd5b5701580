use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

type Rows = Vec<Vec<BigInt>>;

fn sub_multiple(rows: &mut Rows, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

fn negate(rows: &mut Rows, i: usize) {
    for e in rows[i].iter_mut() {
        *e = -&*e;
    }
}

/// Replaces rows (r, i) by (x·r + y·i, -b·r + a·i); a unimodular step when
/// x·a + y·b = 1.
fn combine(rows: &mut Rows, r: usize, i: usize, x: &BigInt, y: &BigInt, a: &BigInt, b: &BigInt) {
    let (rr, ri) = (rows[r].clone(), rows[i].clone());
    for k in 0..rr.len() {
        rows[r][k] = x * &rr[k] + y * &ri[k];
        rows[i][k] = a * &ri[k] - b * &rr[k];
    }
}

fn from_rows(rows: Rows, cols: usize) -> IntMatrix {
    IntMatrix::from_vectors(cols, &rows).expect("row lengths preserved")
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`, `U`
/// unimodular, `H` in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)` and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut h = m.to_rows();
    let mut u = IntMatrix::identity(nrows).to_rows();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        for i in (r + 1)..nrows {
            if h[i][c].is_zero() {
                continue;
            }
            let (a, b) = (h[r][c].clone(), h[i][c].clone());
            let eg = a.extended_gcd(&b);
            let (ag, bg) = (&a / &eg.gcd, &b / &eg.gcd);
            combine(&mut h, r, i, &eg.x, &eg.y, &ag, &bg);
            combine(&mut u, r, i, &eg.x, &eg.y, &ag, &bg);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate(&mut h, r);
            negate(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            sub_multiple(&mut h, i, r, &q);
            sub_multiple(&mut u, i, r, &q);
        }
        r += 1;
    }
    (from_rows(h, ncols), from_rows(u, nrows))
}

/// `U·M·V = S` with `S` diagonal, nonnegative, each diagonal entry dividing
/// the next; `U` and `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

struct Work {
    a: Rows,
    u: Rows,
    v: Rows,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    fn row_sub(&mut self, target: usize, source: usize, q: &BigInt) {
        sub_multiple(&mut self.a, target, source, q);
        sub_multiple(&mut self.u, target, source, q);
    }

    fn col_sub(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let s = row[source].clone();
            row[target] -= q * s;
        }
    }

    /// Smallest nonzero |entry| of the trailing block starting at (t, t).
    fn min_pivot(&self, t: usize, only_cross: bool) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.len() {
            for j in t..self.a[i].len() {
                if only_cross && i != t && j != t {
                    continue;
                }
                let e = &self.a[i][j];
                if e.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| e.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.to_rows(),
        u: IntMatrix::identity(nrows).to_rows(),
        v: IntMatrix::identity(ncols).to_rows(),
    };
    for t in 0..nrows.min(ncols) {
        let Some((pi, pj)) = w.min_pivot(t, false) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in (t + 1)..nrows {
                if !w.a[i][t].is_zero() {
                    let q = &w.a[i][t] / &w.a[t][t];
                    w.row_sub(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in (t + 1)..ncols {
                if !w.a[t][j].is_zero() {
                    let q = &w.a[t][j] / &w.a[t][t];
                    w.col_sub(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = w.min_pivot(t, true).expect("pivot row is nonzero");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            let offender = ((t + 1)..nrows)
                .find(|&i| ((t + 1)..ncols).any(|j| !w.a[i][j].is_multiple_of(&w.a[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    w.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            negate(&mut w.a, t);
            negate(&mut w.u, t);
        }
    }
    SmithForm {
        s: from_rows(w.a, ncols),
        u: from_rows(w.u, nrows),
        v: from_rows(w.v, ncols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_hnf(m: &IntMatrix) {
        let (h, u) = hermite_normal_form(m);
        assert_eq!(u.mul(m).unwrap(), h);
        assert!(u.determinant().unwrap().abs().is_one());
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id), (id.clone(), id.clone()));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(hermite_normal_form(&z), (z.clone(), IntMatrix::identity(2)));
    }

    #[test]
    fn hnf_two_by_two() {
        // Row lattice of [[2,4],[1,3]] has determinant 2: HNF is [[1,1],[0,2]].
        let m = IntMatrix::from_rows(&[[2, 4], [1, 3]]);
        let (h, _) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_rows(&[[1, 1], [0, 2]]));
        check_hnf(&m);
    }

    #[test]
    fn hnf_rectangular_and_negative() {
        check_hnf(&IntMatrix::from_rows(&[[0, -3, 6, 9], [4, 2, -2, 0], [-6, 0, 3, 3]]));
        check_hnf(&IntMatrix::from_rows(&[[0, 0], [0, -5], [0, 3]]));
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s, IntMatrix::from_rows(&[[1, 0], [0, 6]]));
        assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.s);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let snf = smith_normal_form(&id);
        assert_eq!((snf.s.clone(), snf.u.clone(), snf.v.clone()), (id.clone(), id.clone(), id));
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).s, z);
    }
}
