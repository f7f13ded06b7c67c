//! Evaluation of `t -> T(t)x` for matrix semigroups.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::matrix_exp;
use crate::linalg::{check_square, identity};
use crate::{ComplexMatrix, ComplexVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    MatrixExponential,
    ClosedForm,
}

#[derive(Clone, Debug)]
enum Action {
    Exponential,
    Diagonal(Vec<Complex64>),
    Rotation {
        omega: f64,
    },
    Shift,
    Rescaled {
        inner: Box<SemigroupEvaluator>,
        shift: Complex64,
        speed: f64,
    },
}

/// A strongly continuous semigroup on `C^n` together with its generator.
///
/// Closed forms are used when the catalog provides one, so that a
/// semigroup built from a catalog entry never goes through `matrix_exp`.
/// No exponentials are memoized; evaluation is a pure function of `t`.
#[derive(Clone, Debug)]
pub struct SemigroupEvaluator {
    generator: ComplexMatrix,
    action: Action,
}

impl SemigroupEvaluator {
    /// Dense generator evaluated through the matrix exponential.
    pub fn from_generator(a: ComplexMatrix) -> Result<Self> {
        check_square(&a)?;
        Ok(Self {
            generator: a,
            action: Action::Exponential,
        })
    }

    /// `T(t) = diag(e^{t d_k})`.
    pub fn diagonal(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParams(
                "diagonal needs at least one entry".into(),
            ));
        }
        let generator = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(entries.clone()));
        check_square(&generator)?;
        Ok(Self {
            generator,
            action: Action::Diagonal(entries),
        })
    }

    /// Planar rotation with angular speed `omega`, generator `[[0,-w],[w,0]]`.
    pub fn rotation(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!(
                "rotation2d needs omega > 0, got {omega}"
            )));
        }
        let z = Complex64::new(0.0, 0.0);
        let w = Complex64::new(omega, 0.0);
        Ok(Self {
            generator: ComplexMatrix::from_row_slice(2, 2, &[z, -w, w, z]),
            action: Action::Rotation { omega },
        })
    }

    /// Upper shift `N` (ones on the superdiagonal), `T(t) = sum t^k N^k / k!`.
    pub fn nilpotent_shift(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParams(format!(
                "nilpotent_shift needs dim >= 2, got {dim}"
            )));
        }
        let mut n = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim - 1 {
            n[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            generator: n,
            action: Action::Shift,
        })
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn strategy(&self) -> Strategy {
        match &self.action {
            Action::Exponential => Strategy::MatrixExponential,
            Action::Rescaled { inner, .. } => inner.strategy(),
            _ => Strategy::ClosedForm,
        }
    }

    /// The generator `A`, stored exactly (never differentiated numerically).
    pub fn generator_of(&self) -> &ComplexMatrix {
        &self.generator
    }

    /// The operator `T(t)`. `T(0)` is exactly the identity.
    pub fn operator(&self, t: f64) -> Result<ComplexMatrix> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        let n = self.dim();
        if t == 0.0 {
            return Ok(identity(n));
        }
        Ok(match &self.action {
            Action::Exponential => matrix_exp(&self.generator, t)?,
            Action::Diagonal(d) => {
                let v: Vec<Complex64> = d.iter().map(|z| (z * t).exp()).collect();
                ComplexMatrix::from_diagonal(&ComplexVector::from_vec(v))
            }
            Action::Rotation { omega } => {
                let (s, co) = (omega * t).sin_cos();
                let (s, co) = (Complex64::new(s, 0.0), Complex64::new(co, 0.0));
                ComplexMatrix::from_row_slice(2, 2, &[co, -s, s, co])
            }
            Action::Shift => {
                let mut m = ComplexMatrix::zeros(n, n);
                let mut coeff = 1.0;
                for k in 0..n {
                    if k > 0 {
                        coeff *= t / k as f64;
                    }
                    for i in 0..n - k {
                        m[(i, i + k)] = Complex64::new(coeff, 0.0);
                    }
                }
                m
            }
            Action::Rescaled {
                inner,
                shift,
                speed,
            } => inner.operator(speed * t)? * (-shift * t).exp(),
        })
    }

    /// `T(t)x`.
    pub fn evaluate_orbit(&self, t: f64, x: &ComplexVector) -> Result<ComplexVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        if t == 0.0 {
            return Ok(x.clone());
        }
        if let Action::Diagonal(d) = &self.action {
            if t.is_finite() && t > 0.0 {
                return Ok(ComplexVector::from_iterator(
                    x.len(),
                    d.iter().zip(x.iter()).map(|(z, xi)| (z * t).exp() * xi),
                ));
            }
        }
        Ok(self.operator(t)? * x)
    }

    /// `S(t) = e^{-lambda t} T(c t)`, generated by `cA - lambda`.
    pub fn rescale(&self, lambda: Complex64, speed: f64) -> Result<Self> {
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::InvalidParams(format!(
                "rescale needs c > 0, got {speed}"
            )));
        }
        let n = self.dim();
        let generator = &self.generator * Complex64::new(speed, 0.0) - identity(n) * lambda;
        Ok(Self {
            generator,
            action: Action::Rescaled {
                inner: Box::new(self.clone()),
                shift: lambda,
                speed,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, inf_norm, vec_inf_norm};
    use std::f64::consts::PI;

    fn v(values: &[Complex64]) -> ComplexVector {
        ComplexVector::from_column_slice(values)
    }

    #[test]
    fn zero_time_is_exact_identity() {
        let s = SemigroupEvaluator::rotation(3.0).unwrap();
        let x = v(&[c(0.3, 0.1), c(-2.0, 5.0)]);
        assert_eq!(s.evaluate_orbit(0.0, &x).unwrap(), x);
        assert_eq!(s.operator(0.0).unwrap(), identity(2));
    }

    #[test]
    fn rotation_returns_after_full_turn() {
        let s = SemigroupEvaluator::rotation(1.0).unwrap();
        let x = v(&[c(1.0, 0.0), c(0.5, -1.0)]);
        let y = s.evaluate_orbit(2.0 * PI, &x).unwrap();
        assert!(vec_inf_norm(&(y - &x)) < 1e-14);
    }

    #[test]
    fn nilpotent_shift_closed_form() {
        // e^{N} e_3 = e_3 + N e_3 + N^2 e_3 / 2 = (1/2, 1, 1)
        let s = SemigroupEvaluator::nilpotent_shift(3).unwrap();
        let y = s
            .evaluate_orbit(1.0, &v(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]))
            .unwrap();
        assert_eq!(y, v(&[c(0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0)]));
        let dense = SemigroupEvaluator::from_generator(s.generator_of().clone()).unwrap();
        let diff = dense.operator(2.5).unwrap() - s.operator(2.5).unwrap();
        assert!(inf_norm(&diff) < 1e-13);
    }

    #[test]
    fn rescale_identity_parameters_are_inert() {
        let s = SemigroupEvaluator::rotation(1.0).unwrap();
        let r = s.rescale(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(r.operator(0.7).unwrap(), s.operator(0.7).unwrap());
        assert_eq!(r.generator_of(), s.generator_of());
    }

    #[test]
    fn rescale_cancels_matching_phase() {
        let s = SemigroupEvaluator::diagonal(vec![c(0.0, 1.0)]).unwrap();
        let r = s.rescale(c(0.0, 1.0), 1.0).unwrap();
        for t in [0.5, 1.0, 10.0] {
            assert!((r.operator(t).unwrap()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(r.generator_of()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn rescale_generator_is_shifted_and_scaled() {
        let s = SemigroupEvaluator::nilpotent_shift(3).unwrap();
        let lambda = c(0.2, -1.0);
        let r = s.rescale(lambda, 2.5).unwrap();
        let expected = s.generator_of() * c(2.5, 0.0) - identity(3) * lambda;
        assert!(inf_norm(&(r.generator_of() - expected)) < 1e-10);
        assert!(s.rescale(lambda, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = SemigroupEvaluator::rotation(1.0).unwrap();
        assert!(matches!(
            s.evaluate_orbit(1.0, &v(&[c(1.0, 0.0)])),
            Err(Error::DimensionMismatch {
                expected: 2,
                actual: 1
            })
        ));
        assert!(s.operator(-1.0).is_err());
        assert!(SemigroupEvaluator::rotation(0.0).is_err());
        assert!(SemigroupEvaluator::nilpotent_shift(1).is_err());
    }
}
