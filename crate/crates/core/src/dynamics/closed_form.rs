use serde::Serialize;

use super::orbit::{Mode, Orbit, OrbitScalar};
use crate::algebra::{bits_for_digits, Real, Scalar};
use crate::error::{Error, Result};

/// Positive real root of `x³ = x + 1`, by Newton iteration.
pub fn plastic_number(digits: usize) -> Real {
    let bits = bits_for_digits(digits);
    let one = Real::from_i64(1, bits);
    let three = Real::from_i64(3, bits);
    let mut x = Real::from_rational_bits(&num_rational::BigRational::new(4.into(), 3.into()), bits);
    for _ in 0..(digits.max(8).ilog2() as usize + 8) {
        let f = x.powi(3) - x.clone() - one.clone();
        let df = three.clone() * x.powi(2) - one.clone();
        x = x - f / df;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `λ = √r`: the orbit stays on one invariant leaf.
    Fixed,
    /// `λ ≠ √r`: the leaf is invariant under the second iterate only.
    TwoPeriodic,
}

/// Singular Somos-5 solutions with `x₁x₄ = r x₂x₃`, `x₂x₅ = r x₃x₄`,
/// `x₃x₅ = λ x₄²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub family: Family,
    pub x3: Real,
    pub x4: Real,
    pub lambda: Real,
    pub r: Real,
}

impl ClosedForm {
    pub fn fixed(x3: Real, x4: Real, r: Real) -> Self {
        ClosedForm {
            family: Family::Fixed,
            lambda: r.sqrt(),
            x3,
            x4,
            r,
        }
    }

    pub fn two_periodic(x3: Real, x4: Real, lambda: Real, r: Real) -> Self {
        ClosedForm {
            family: Family::TwoPeriodic,
            x3,
            x4,
            lambda,
            r,
        }
    }

    /// `(x₁, …, x₅)` satisfying the three constraints.
    pub fn initial_data(&self) -> Vec<Real> {
        let x5 = self.lambda.clone() * self.x4.powi(2) / self.x3.clone();
        let x2 = self.r.clone() * self.x3.clone() * self.x4.clone() / x5.clone();
        let x1 = self.r.clone() * x2.clone() * self.x3.clone() / self.x4.clone();
        vec![x1, x2, self.x3.clone(), self.x4.clone(), x5]
    }

    /// Closed-form value of `x_k`, `k ≥ 1`.
    pub fn term(&self, k: usize) -> Real {
        let k = k as i64;
        match self.family {
            Family::Fixed => {
                let n = k - 5;
                let quarter = self.r.sqrt().sqrt();
                quarter.powi((n + 2) * (n + 1)) * self.x4.powi(n + 2) / self.x3.powi(n + 1)
            }
            Family::TwoPeriodic if k % 2 == 0 => {
                let n = (k - 4) / 2;
                self.lambda.powi(n) * self.r.powi(n * n) * self.x4.powi(2 * n + 1) / self.x3.powi(2 * n)
            }
            Family::TwoPeriodic => {
                let n = (k - 5) / 2;
                self.lambda.powi(n + 1) * self.r.powi(n * (n + 1)) * self.x4.powi(2 * n + 2) / self.x3.powi(2 * n + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub family: Family,
    /// `(k, log10 relative error of x_k)` for every sequence term.
    pub errors: Vec<(usize, f64)>,
    pub max_error_log10: f64,
    pub tolerance_log10: f64,
    pub passed: bool,
}

/// Compares the sequence `x₁, x₂, …` read off a Somos-5 orbit with the
/// closed form, term by term.
pub fn verify_closed_form(orbit: &Orbit<Real>, form: &ClosedForm, tolerance_log10: f64) -> Result<ClosedFormReport> {
    if orbit.map.dim_in() != 5 {
        return Err(Error::DimensionMismatch {
            context: "Somos-5 orbit",
            expected: 5,
            found: orbit.map.dim_in(),
        });
    }
    let Mode::Float { digits } = orbit.mode() else {
        unreachable!("real orbits are float mode")
    };
    if (digits as f64) < -tolerance_log10 + 8.0 {
        return Err(Error::InvalidInput(format!(
            "{digits}-digit orbit cannot resolve a tolerance of 1e{tolerance_log10}"
        )));
    }
    let mut sequence: Vec<Real> = orbit.points[0].clone();
    sequence.extend(orbit.points[1..].iter().map(|p| p[4].clone()));
    let errors: Vec<(usize, f64)> = sequence
        .iter()
        .enumerate()
        .map(|(i, x)| (i + 1, x.log10_rel_diff(&form.term(i + 1))))
        .collect();
    let max_error_log10 = errors.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(ClosedFormReport {
        family: form.family,
        passed: max_error_log10 < tolerance_log10,
        errors,
        max_error_log10,
        tolerance_log10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plastic_number_root() {
        let r = plastic_number(64);
        let resid = r.powi(3) - r.clone() - Real::from_i64(1, r.bits());
        assert!(resid.log10_abs() < -60.0);
        assert!((r.to_f64() - 1.324_717_957_244_746).abs() < 1e-14);
    }

    #[test]
    fn formulas_reproduce_initial_data() {
        let bits = bits_for_digits(64);
        let r = plastic_number(64);
        let one = Real::from_i64(1, bits);
        let two = Real::from_i64(2, bits);
        let forms = [
            ClosedForm::fixed(one.clone(), one.clone(), r.clone()),
            ClosedForm::two_periodic(one.clone(), one.clone(), two * r.sqrt(), r),
        ];
        for form in forms {
            for (k, x) in form.initial_data().iter().enumerate() {
                assert!(x.log10_rel_diff(&form.term(k + 1)) < -60.0, "{:?} k={}", form.family, k + 1);
            }
        }
    }
}
