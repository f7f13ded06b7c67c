//! Spectral inclusion and mapping relations between a generator `A` and
//! its semigroup `T(t)`, checked numerically on finite sets of times.
//!
//! All comparisons are set-wise: `e^{t mu}` can coincide for distinct
//! `mu` (they differ by `2 pi i / t`), so multiplicities are reported by
//! the spectra but never required to match.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    column_space, columns_to_matrix, directed_distance, distinct, hausdorff, identity, inf_norm,
    null_space, principal_angle, scaled, shifted, sigma_min, spectral_radius,
};
use crate::report::{CheckEntry, CheckReport, Verdict};
use crate::semigroup::SemigroupEvaluator;
use crate::spectra::{algebraic_spectrum, point_values, residual_spectrum};
use crate::{ComplexMatrix, ComplexVector};

/// Default times for the eigenspace intersection: pairwise ratios are
/// irrational, so no two distinct eigenvalues alias at every time.
pub const DEFAULT_T_GRID: [f64; 3] = [1.0, SQRT_2, FRAC_PI_2];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappingRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub t: f64,
    pub lhs_set: Vec<Complex64>,
    pub rhs_set: Vec<Complex64>,
    /// Hausdorff distance (one-sided for inclusions).
    pub hausdorff: f64,
    /// Values of modulus `<= tol` dropped from the semigroup side.
    pub removed_zeros: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappingReport {
    pub theorem_id: String,
    pub tol: f64,
    pub rows: Vec<MappingRow>,
    pub verdict: Verdict,
}

impl MappingReport {
    fn new(theorem_id: &str, tol: f64, rows: Vec<MappingRow>) -> Self {
        let verdict = Verdict::from_bool(rows.iter().all(|r| r.verdict.is_pass()));
        Self {
            theorem_id: theorem_id.to_string(),
            tol,
            rows,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.hausdorff).fold(0.0, f64::max)
    }

    pub fn to_check_report(&self) -> CheckReport {
        let entries = self
            .rows
            .iter()
            .map(|r| {
                let name = match &r.variant {
                    Some(v) => format!("{}/{v}", self.theorem_id),
                    None => self.theorem_id.clone(),
                };
                CheckEntry::at_most(name, r.hausdorff, self.tol).at(r.t)
            })
            .collect();
        CheckReport::new(self.theorem_id.clone(), entries)
    }
}

fn check_times(t_values: &[f64]) -> Result<()> {
    if t_values.is_empty() {
        return Err(Error::InvalidParams("at least one time is required".into()));
    }
    if let Some(t) = t_values.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParams(format!(
            "times must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

fn check_dims(a: &ComplexMatrix, s: &SemigroupEvaluator) -> Result<()> {
    if a.nrows() != s.dim() || a.ncols() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            actual: a.nrows(),
        });
    }
    Ok(())
}

fn exp_image(values: &[Complex64], t: f64) -> Vec<Complex64> {
    values.iter().map(|mu| (mu * t).exp()).collect()
}

/// Drops values with modulus `<= tol`; returns the kept values and the count removed.
fn without_zero(values: Vec<Complex64>, tol: f64) -> (Vec<Complex64>, usize) {
    let before = values.len();
    let kept: Vec<Complex64> = values.into_iter().filter(|z| z.norm() > tol).collect();
    let removed = before - kept.len();
    (kept, removed)
}

fn mapping_rows<F>(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    t_values: &[f64],
    tol: f64,
    spectrum: F,
) -> Result<Vec<MappingRow>>
where
    F: Fn(&ComplexMatrix, f64) -> Result<Vec<Complex64>>,
{
    check_dims(a, s)?;
    check_times(t_values)?;
    let generator_side = spectrum(a, tol)?;
    t_values
        .iter()
        .map(|&t| {
            let op = s.operator(t)?;
            let (lhs, removed_zeros) = without_zero(spectrum(&op, tol)?, tol);
            let rhs = distinct(&exp_image(&generator_side, t), scaled(tol, &op));
            let d = hausdorff(&lhs, &rhs);
            Ok(MappingRow {
                variant: None,
                t,
                lhs_set: lhs,
                rhs_set: rhs,
                hausdorff: d,
                removed_zeros,
                verdict: Verdict::from_bool(d <= tol),
            })
        })
        .collect()
}

/// `sigma_p(T(t)) \ {0} = e^{t sigma_p(A)}` for each `t`.
pub fn point_mapping_check(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    t_values: &[f64],
    tol: f64,
) -> Result<MappingReport> {
    let rows = mapping_rows(a, s, t_values, tol, point_values)?;
    Ok(MappingReport::new("point-mapping", tol, rows))
}

/// `sigma_r(T(t)) \ {0} = e^{t sigma_r(A)}`, both sides by the rank criterion.
pub fn residual_mapping_check(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    t_values: &[f64],
    tol: f64,
) -> Result<MappingReport> {
    let rows = mapping_rows(a, s, t_values, tol, residual_spectrum)?;
    Ok(MappingReport::new("residual-mapping", tol, rows))
}

/// `e^{t sigma(A)} c sigma(T(t))` for the point, algebraic and residual spectra.
pub fn inclusion_checks(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    t_values: &[f64],
    tol: f64,
) -> Result<MappingReport> {
    check_dims(a, s)?;
    check_times(t_values)?;
    type SpectrumFn = fn(&ComplexMatrix, f64) -> Result<Vec<Complex64>>;
    let variants: [(&str, SpectrumFn); 3] = [
        ("point", point_values),
        ("algebraic", algebraic_spectrum),
        ("residual", residual_spectrum),
    ];
    let mut rows = Vec::new();
    for (name, spectrum) in variants {
        let generator_side = spectrum(a, tol)?;
        for &t in t_values {
            let op = s.operator(t)?;
            let image = exp_image(&generator_side, t);
            let semigroup_side = spectrum(&op, tol)?;
            let d = directed_distance(&image, &semigroup_side);
            rows.push(MappingRow {
                variant: Some(name.to_string()),
                t,
                lhs_set: image,
                rhs_set: semigroup_side,
                hausdorff: d,
                removed_zeros: 0,
                verdict: Verdict::from_bool(d <= tol),
            });
        }
    }
    Ok(MappingReport::new("inclusion", tol, rows))
}

/// Comparison of an eigenspace of `A` against one built from the semigroup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenspaceReport {
    pub id: String,
    pub lambda: Complex64,
    pub dim_generator: usize,
    pub dim_semigroup: usize,
    pub angle: f64,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EigenspaceReport {
    fn new(
        id: &str,
        lambda: Complex64,
        generator: &ComplexMatrix,
        semigroup: &ComplexMatrix,
        tol: f64,
    ) -> Self {
        let angle = principal_angle(generator, semigroup);
        let ok = generator.ncols() == semigroup.ncols() && angle <= tol;
        Self {
            id: id.to_string(),
            lambda,
            dim_generator: generator.ncols(),
            dim_semigroup: semigroup.ncols(),
            angle,
            tol,
            verdict: Verdict::from_bool(ok),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn to_check_report(&self) -> CheckReport {
        let label = format!(
            "{}[lambda={:.6}{:+.6}i]",
            self.id, self.lambda.re, self.lambda.im
        );
        let mut report = CheckReport::new(
            self.id.clone(),
            vec![
                CheckEntry {
                    value: (self.dim_semigroup as f64 - self.dim_generator as f64).abs(),
                    threshold: 0.0,
                    ..CheckEntry::holds(
                        format!("{label}/dimension"),
                        self.dim_generator == self.dim_semigroup,
                    )
                },
                CheckEntry::at_most(format!("{label}/principal_angle"), self.angle, self.tol),
            ],
        );
        report.notes = self.notes.clone();
        report
    }
}

/// True when the ratio is within `1e-9` of a fraction with denominator `<= 64`.
fn looks_rational(ratio: f64) -> bool {
    (1..=64).any(|q| {
        let p = (ratio * q as f64).round();
        (ratio * q as f64 - p).abs() <= 1e-9 * q as f64
    })
}

fn has_independent_pair(t_grid: &[f64]) -> bool {
    t_grid.iter().enumerate().any(|(i, &a)| {
        t_grid[i + 1..]
            .iter()
            .any(|&b| a > 0.0 && b > 0.0 && !looks_rational(a / b))
    })
}

/// `ker(lambda - A) = intersection over t of ker(e^{lambda t} - T(t))`,
/// with the intersection taken over `t_grid`.
pub fn eigenspace_intersection_check(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    lambda: Complex64,
    t_grid: &[f64],
    tol: f64,
) -> Result<EigenspaceReport> {
    check_dims(a, s)?;
    check_times(t_grid)?;
    let gap = sigma_min(&shifted(a, lambda));
    if gap > scaled(tol, a) {
        return Err(Error::NotAnEigenvalue {
            lambda: format!("{lambda}"),
            sigma_min: gap,
        });
    }
    let n = s.dim();
    let mut blocks = Vec::with_capacity(t_grid.len());
    let mut scale = 1.0f64;
    for &t in t_grid {
        let block = identity(n) * (lambda * t).exp() - s.operator(t)?;
        scale = scale.max(inf_norm(&block));
        blocks.push(block);
    }
    let mut stacked = ComplexMatrix::zeros(n * blocks.len(), n);
    for (k, b) in blocks.iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(b);
    }
    let generator = null_space(&shifted(a, lambda), scaled(tol, a));
    let semigroup = null_space(&stacked, tol * scale);
    let mut report = EigenspaceReport::new(
        "eigenspace-intersection",
        lambda,
        &generator,
        &semigroup,
        tol,
    );
    if !has_independent_pair(t_grid) {
        report
            .notes
            .push("t_grid has no rationally independent pair; aliased eigenvalues may inflate the intersection".into());
    }
    Ok(report)
}

/// Default lattice range for the union check: every `lambda + 2 pi i n / t`
/// inside the disc of radius `rho(A) + |lambda|` is covered.
pub fn default_n_max(a: &ComplexMatrix, lambda: Complex64, t: f64) -> Result<usize> {
    let radius = spectral_radius(a)? + lambda.norm();
    Ok((t * radius / (2.0 * PI)).ceil() as usize + 1)
}

/// `ker(e^{lambda t} - T(t)) = span of ker(lambda + 2 pi i n / t - A)`
/// over `|n| <= n_max`.
pub fn eigenspace_union_check(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    lambda: Complex64,
    t: f64,
    n_max: Option<usize>,
    tol: f64,
) -> Result<EigenspaceReport> {
    check_dims(a, s)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParams(format!(
            "union check needs t > 0, got {t}"
        )));
    }
    let n_max = match n_max {
        Some(k) => k,
        None => default_n_max(a, lambda, t)?,
    };
    let dim = s.dim();
    let op = s.operator(t)?;
    let block = identity(dim) * (lambda * t).exp() - &op;
    let semigroup = null_space(&block, tol * inf_norm(&block).max(1.0));

    let step = Complex64::new(0.0, 2.0 * PI / t);
    let mut vectors: Vec<ComplexVector> = Vec::new();
    for k in -(n_max as i64)..=(n_max as i64) {
        let mu = lambda + step * k as f64;
        let kernel = null_space(&shifted(a, mu), scaled(tol, a));
        vectors.extend(kernel.column_iter().map(|c| c.into_owned()));
    }
    let generator = if vectors.is_empty() {
        ComplexMatrix::zeros(dim, 0)
    } else {
        column_space(&columns_to_matrix(dim, &vectors), tol)
    };

    let report = EigenspaceReport::new("eigenspace-union", lambda, &generator, &semigroup, tol);
    if report.dim_generator != report.dim_semigroup {
        let radius = spectral_radius(a)?;
        let next = (n_max + 1) as f64;
        let beyond = [lambda + step * next, lambda - step * next];
        if beyond.iter().any(|z| z.norm() <= radius + tol) {
            return Err(Error::NMaxTooSmall { n_max });
        }
    }
    Ok(report)
}
