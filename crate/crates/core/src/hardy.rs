//! Rotation semigroup `f(z) -> f(e^{it} z)` on bounded holomorphic
//! functions of the unit disc, truncated to polynomials of degree `N`.
//!
//! A function is stored by its Taylor coefficients, so the semigroup is
//! diagonal: `(T(t)f)_n = e^{int} f_n`. Every report produced here carries
//! a "truncated model" note.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, c, column_space, columns_to_matrix, hausdorff, principal_angle, vec_inf_norm,
};
use crate::periodic::spectral_projection;
use crate::quadrature::QuadratureConfig;
use crate::report::{CheckEntry, CheckReport};
use crate::semigroup::SemigroupEvaluator;
use crate::spectra::point_spectrum;
use crate::{ComplexMatrix, ComplexVector};

const TRUNCATED: &str = "truncated model: polynomials of degree <= N";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscFunction {
    pub degree: usize,
    pub coeffs: Vec<Complex64>,
}

impl DiscFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let f = Self {
            degree: coeffs.len().saturating_sub(1),
            coeffs,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![c(0.0, 0.0); degree + 1],
        }
    }

    /// `z^n` embedded in degree `degree`.
    pub fn monomial(n: usize, degree: usize) -> Result<Self> {
        if n > degree {
            return Err(Error::InvalidParams(format!(
                "monomial {n} exceeds degree {degree}"
            )));
        }
        let mut f = Self::zero(degree);
        f.coeffs[n] = c(1.0, 0.0);
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.degree + 1,
                actual: self.coeffs.len(),
            });
        }
        if let Some(k) = self
            .coeffs
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(())
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_vec(self.coeffs.clone())
    }

    pub fn from_vector(v: &ComplexVector) -> Result<Self> {
        Self::new(v.iter().copied().collect())
    }

    /// Horner evaluation; requires `|z| < 1`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "|z| = {} is outside the open disc",
                z.norm()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, &a| acc * z + a))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }
}

/// Sampled weight `nu` on the open disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub samples: Vec<(Complex64, f64)>,
    /// Whether `nu` vanishes at the boundary.
    pub decays: bool,
}

#[derive(Serialize, Deserialize)]
struct WeightRow {
    r: f64,
    theta: f64,
    value: f64,
}

impl WeightFunction {
    pub fn new(samples: Vec<(Complex64, f64)>, decays: bool) -> Result<Self> {
        let w = Self { samples, decays };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for (z, v) in &self.samples {
            if !(z.norm() < 1.0) {
                return Err(Error::InvalidParams(format!(
                    "weight sample {z} is outside the open disc"
                )));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::InvalidParams(format!(
                    "weight value {v} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }

    /// Samples `nu` on the polar grid `radii x angles`.
    pub fn radial_grid(
        radii: &[f64],
        angles: &[f64],
        nu: impl Fn(Complex64) -> f64,
        decays: bool,
    ) -> Result<Self> {
        let samples = radii
            .iter()
            .flat_map(|&r| angles.iter().map(move |&th| Complex64::from_polar(r, th)))
            .map(|z| (z, nu(z)))
            .collect();
        Self::new(samples, decays)
    }

    /// `nu(z) = 1 - |z|` on `r = 0, 0.1, ..., 0.9` and `angles` equispaced angles.
    pub fn linear_decay(angles: usize) -> Result<Self> {
        let radii: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
        let thetas: Vec<f64> = (0..angles.max(1))
            .map(|k| 2.0 * PI * k as f64 / angles.max(1) as f64)
            .collect();
        Self::radial_grid(&radii, &thetas, |z| 1.0 - z.norm(), true)
    }

    /// CSV with header `r,theta,value`.
    pub fn read_csv<R: Read>(reader: R, decays: bool) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut samples = Vec::new();
        for row in rdr.deserialize() {
            let row: WeightRow = row?;
            samples.push((Complex64::from_polar(row.r, row.theta), row.value));
        }
        Self::new(samples, decays)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        for (z, value) in &self.samples {
            let (r, theta) = z.to_polar();
            wtr.serialize(WeightRow {
                r,
                theta,
                value: *value,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `max |f(z)| nu(z)` over the samples of `nu`. This is a lower bound for
/// the supremum over the whole disc.
pub fn weighted_seminorm(f: &DiscFunction, nu: &WeightFunction) -> Result<f64> {
    if nu.samples.is_empty() {
        return Err(Error::EmptyWeights);
    }
    nu.samples
        .iter()
        .try_fold(0.0f64, |m, (z, v)| Ok(m.max(f.evaluate(*z)?.norm() * v)))
}

/// Generator `diag(0, i, ..., Ni)`, the truncation of `f -> i z f'`.
pub fn disc_rotation_generator(degree: usize) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_fn(degree + 1, |n, _| c(0.0, n as f64)))
}

pub fn disc_rotation_semigroup(degree: usize) -> Result<SemigroupEvaluator> {
    SemigroupEvaluator::diagonal((0..=degree).map(|n| c(0.0, n as f64)).collect())
}

/// Checks that the truncated generator has point spectrum `{0, i, ..., Ni}`
/// with one-dimensional eigenspaces spanned by the monomials.
pub fn verify_hardy_spectrum(degree: usize, tol: f64) -> Result<CheckReport> {
    if degree == 0 {
        return Err(Error::InvalidParams(
            "Hardy spectrum check needs N >= 1".into(),
        ));
    }
    verify_hardy_spectrum_of(&disc_rotation_generator(degree), tol)
}

/// Same as [`verify_hardy_spectrum`] for an arbitrary `(N+1) x (N+1)`
/// matrix; used for negative controls with a perturbed generator.
pub fn verify_hardy_spectrum_of(a: &ComplexMatrix, tol: f64) -> Result<CheckReport> {
    let dim = a.nrows();
    let expected: Vec<Complex64> = (0..dim).map(|n| c(0.0, n as f64)).collect();
    let pairs = point_spectrum(a, tol)?;
    let found: Vec<Complex64> = pairs.iter().map(|p| p.lambda).collect();
    let mut entries = vec![CheckEntry::at_most(
        "spectrum",
        hausdorff(&found, &expected),
        tol,
    )];
    for p in &pairs {
        let n = p.lambda.im.round().max(0.0) as usize;
        let label = format!("eigenspace[n={n}]");
        entries.push(CheckEntry {
            value: p.eigenvectors.len() as f64,
            threshold: 1.0,
            ..CheckEntry::holds(format!("{label}/dimension"), p.eigenvectors.len() == 1)
        });
        let angle = if n < dim {
            let e = ComplexMatrix::from_columns(&[basis_vector(dim, n)]);
            principal_angle(&orthonormal(dim, &p.eigenvectors), &e)
        } else {
            PI / 2.0
        };
        entries.push(CheckEntry::at_most(
            format!("{label}/monomial_angle"),
            angle,
            tol,
        ));
    }
    Ok(CheckReport::new("hardy-spectrum", entries).with_note(TRUNCATED))
}

fn orthonormal(dim: usize, vectors: &[ComplexVector]) -> ComplexMatrix {
    column_space(&columns_to_matrix(dim, vectors), 1e-12)
}

/// Computes `P_n g` by the period average and compares it with
/// `coeffs[n] z^n`.
pub fn hardy_projection_check(
    degree: usize,
    n: usize,
    g: &DiscFunction,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    let (projected, expected) = hardy_projection(degree, n, g, cfg)?;
    let err = vec_inf_norm(&(&projected - &expected));
    Ok(CheckReport::new(
        "hardy-projection",
        vec![CheckEntry::at_most(
            format!("coefficient_extraction[n={n}]"),
            err,
            cfg.tol,
        )],
    )
    .with_note(TRUNCATED))
}

/// Returns `(P_n g, coeffs[n] e_n)` as coefficient vectors.
pub fn hardy_projection(
    degree: usize,
    n: usize,
    g: &DiscFunction,
    cfg: &QuadratureConfig,
) -> Result<(ComplexVector, ComplexVector)> {
    g.validate()?;
    if g.degree != degree {
        return Err(Error::DimensionMismatch {
            expected: degree + 1,
            actual: g.coeffs.len(),
        });
    }
    if n > degree {
        return Err(Error::InvalidParams(format!(
            "projection index {n} exceeds degree {degree}"
        )));
    }
    let s = disc_rotation_semigroup(degree)?;
    let p = spectral_projection(&s, 2.0 * PI, n as i64, cfg)?;
    let projected = p * g.to_vector();
    let expected = basis_vector(degree + 1, n) * g.coeffs[n];
    Ok((projected, expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig {
            tol: 1e-10,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn half_turn_flips_odd_coefficients() {
        let s = disc_rotation_semigroup(2).unwrap();
        let f = DiscFunction::new(vec![c(1.0, 0.0); 3]).unwrap();
        let out = s.evaluate_orbit(PI, &f.to_vector()).unwrap();
        let want = [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        for (a, b) in out.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn full_turn_is_identity() {
        for degree in [0, 3, 8] {
            let s = disc_rotation_semigroup(degree).unwrap();
            let t = s.operator(2.0 * PI).unwrap();
            let err = crate::linalg::inf_norm(&(t - crate::linalg::identity(degree + 1)));
            assert!(err < 1e-13, "degree {degree}: {err}");
        }
    }

    #[test]
    fn spectrum_small_and_large() {
        assert!(verify_hardy_spectrum(1, 1e-10).unwrap().passed());
        let r = verify_hardy_spectrum(8, 1e-10).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.notes, vec![TRUNCATED.to_string()]);
        assert!(verify_hardy_spectrum(0, 1e-10).is_err());
    }

    #[test]
    fn corrupted_generator_fails() {
        let mut a = disc_rotation_generator(4);
        a[(0, 1)] += c(1e-2, 0.0);
        let r = verify_hardy_spectrum_of(&a, 1e-10).unwrap();
        assert!(!r.passed());
        assert!(r.failures().any(|e| e.name.ends_with("monomial_angle")));
    }

    #[test]
    fn projection_extracts_coefficient() {
        let g = DiscFunction::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 3.0)]).unwrap();
        let (p, _) = hardy_projection(2, 1, &g, &cfg()).unwrap();
        assert!((p[0].norm() + (p[1] - c(2.0, 0.0)).norm() + p[2].norm()) < 1e-12);
        assert!(hardy_projection_check(2, 1, &g, &cfg()).unwrap().passed());
    }

    #[test]
    fn projection_of_monomials() {
        for m in 0..=3 {
            let g = DiscFunction::monomial(m, 3).unwrap();
            for n in 0..=3 {
                let (p, _) = hardy_projection(3, n, &g, &cfg()).unwrap();
                let want = if n == m {
                    g.to_vector()
                } else {
                    ComplexVector::zeros(4)
                };
                assert!(vec_inf_norm(&(p - want)) < 1e-12);
            }
        }
    }

    #[test]
    fn seminorm_examples() {
        let nu = WeightFunction::linear_decay(1).unwrap();
        assert_eq!(weighted_seminorm(&DiscFunction::zero(3), &nu).unwrap(), 0.0);
        let z = DiscFunction::monomial(1, 1).unwrap();
        assert!((weighted_seminorm(&z, &nu).unwrap() - 0.25).abs() < 1e-15);
        let flat = WeightFunction::radial_grid(&[0.0, 0.5], &[0.0, 1.0], |_| 0.3, false).unwrap();
        let one = DiscFunction::new(vec![c(1.0, 0.0)]).unwrap();
        assert!((weighted_seminorm(&one, &flat).unwrap() - 0.3).abs() < 1e-15);
        let empty = WeightFunction {
            samples: vec![],
            decays: true,
        };
        assert!(matches!(
            weighted_seminorm(&one, &empty),
            Err(Error::EmptyWeights)
        ));
    }

    #[test]
    fn weight_csv_round_trip() {
        let nu = WeightFunction::linear_decay(4).unwrap();
        let mut buf = Vec::new();
        nu.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("r,theta,value"));
        let back = WeightFunction::read_csv(buf.as_slice(), true).unwrap();
        assert_eq!(back.samples.len(), nu.samples.len());
        for ((z1, v1), (z2, v2)) in back.samples.iter().zip(&nu.samples) {
            assert!((z1 - z2).norm() < 1e-14 && v1 == v2);
        }
        assert!(WeightFunction::new(vec![(c(1.0, 0.0), 1.0)], true).is_err());
        assert!(WeightFunction::new(vec![(c(0.0, 0.0), -1.0)], true).is_err());
    }

    #[test]
    fn evaluation_and_json() {
        let f = DiscFunction::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(f.evaluate(c(0.5, 0.0)).unwrap(), c(1.0, 0.5));
        assert!(f.evaluate(c(1.0, 0.0)).is_err());
        assert_eq!(DiscFunction::from_json(&f.to_json().unwrap()).unwrap(), f);
        assert!(DiscFunction::from_json(r#"{"degree":2,"coeffs":[[1,0]]}"#).is_err());
    }
}
