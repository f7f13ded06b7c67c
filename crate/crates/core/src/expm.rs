//! Matrix exponential via scaling and squaring with a degree-13 Padé core.
//!
//! Follows Higham (2005), "The Scaling and Squaring Method for the Matrix
//! Exponential Revisited". Only the degree-13 approximant is used: the
//! matrices here are small, so the cheaper low-degree branches buy nothing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_square, identity, one_norm};
use crate::ComplexMatrix;

/// Largest `|tA|_1` accepted before reporting overflow. `e^700` is close to
/// the largest finite double.
pub const DEFAULT_EXP_NORM_BOUND: f64 = 700.0;

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `e^{tA}` with the default overflow bound.
pub fn matrix_exp(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    matrix_exp_bounded(a, t, DEFAULT_EXP_NORM_BOUND)
}

pub fn matrix_exp_bounded(a: &ComplexMatrix, t: f64, bound: f64) -> Result<ComplexMatrix> {
    let n = check_square(a)?;
    if !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "time must be finite, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(identity(n));
    }
    let scaled = a * Complex64::new(t, 0.0);
    let norm = one_norm(&scaled);
    if norm > bound {
        return Err(Error::Overflow { norm, bound });
    }
    if n == 1 {
        return Ok(ComplexMatrix::from_element(1, 1, scaled[(0, 0)].exp()));
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let m = scaled * Complex64::new(2f64.powi(-squarings), 0.0);
    let mut e = pade13(&m)?;
    for _ in 0..squarings {
        e = &e * &e;
    }
    Ok(e)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.nrows();
    let b = |k: usize| Complex64::new(PADE_13[k], 0.0);
    let eye = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &eye * b(1);
    let u = a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &eye * b(0);

    let p = &v + &u;
    let q = &v - &u;
    q.lu().solve(&p).ok_or_else(|| Error::NoConvergence {
        what: "Pade denominator in matrix exponential".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, inf_norm};
    use std::f64::consts::PI;

    /// Truncated power series, summed until the terms drop below rounding.
    fn series_exp(a: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = a.nrows();
        let ta = a * c(t, 0.0);
        let mut term = identity(n);
        let mut sum = identity(n);
        for k in 1..200 {
            term = &term * &ta * c(1.0 / k as f64, 0.0);
            sum += &term;
            if inf_norm(&term) < 1e-18 * inf_norm(&sum) {
                break;
            }
        }
        sum
    }

    fn max_rel_err(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
        x.iter()
            .zip(y.iter())
            .map(|(p, q)| (p - q).norm() / q.norm().max(1.0))
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_generator_gives_identity() {
        let e = matrix_exp(&ComplexMatrix::zeros(3, 3), 7.0).unwrap();
        assert_eq!(e, identity(3));
    }

    #[test]
    fn full_turn_phase_is_identity() {
        let a = ComplexMatrix::from_element(1, 1, c(0.0, 2.0 * PI));
        let e = matrix_exp(&a, 1.0).unwrap();
        assert!(max_rel_err(&e, &identity(1)) < 1e-12);
    }

    #[test]
    fn quarter_rotation_matches_series() {
        let a = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let e = matrix_exp(&a, PI / 2.0).unwrap();
        let oracle = series_exp(&a, PI / 2.0);
        let expected = a.clone();
        assert!(max_rel_err(&oracle, &expected) < 1e-14);
        assert!(max_rel_err(&e, &oracle) < 1e-12);
    }

    #[test]
    fn scaled_branch_matches_series() {
        // |A| well above theta_13 so several squarings happen; the
        // eigenvalues are mildly negative so the series stays accurate.
        let a = ComplexMatrix::from_row_slice(
            3,
            3,
            &[
                c(-1.0, 2.0),
                c(0.5, 0.0),
                c(0.0, -1.0),
                c(0.3, 0.1),
                c(-2.0, -1.0),
                c(0.7, 0.0),
                c(0.0, 0.2),
                c(-0.4, 0.0),
                c(-1.5, 3.0),
            ],
        );
        let t = 4.0;
        let e = matrix_exp(&a, t).unwrap();
        // power the series of a small step to keep the oracle stable
        let step = series_exp(&a, t / 64.0);
        let mut oracle = identity(3);
        for _ in 0..64 {
            oracle = &oracle * &step;
        }
        let scale = inf_norm(&oracle);
        assert!(inf_norm(&(&e - &oracle)) / scale < 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        let a = identity(2) * c(100.0, 0.0);
        assert!(matches!(matrix_exp(&a, 10.0), Err(Error::Overflow { .. })));
        assert!(matrix_exp(&a, f64::NAN).is_err());
    }
}
