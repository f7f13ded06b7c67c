use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use sgspec_core::catalog::random_vector;
use sgspec_core::hardy::{
    hardy_projection_check, verify_hardy_spectrum, weighted_seminorm, DiscFunction, WeightFunction,
};
use sgspec_core::linalg::{c, eigenvalues, identity, inf_norm, spectral_radius, vec_inf_norm};
use sgspec_core::mapping::{
    eigenspace_intersection_check, eigenspace_union_check, point_mapping_check,
    residual_mapping_check, DEFAULT_T_GRID,
};
use sgspec_core::periodic::{
    detect_period, fourier_reconstruct_a, fourier_reconstruct_t, laurent_coefficients,
    projection_distance, projection_family, projection_family_checks,
};
use sgspec_core::quadrature::{laplace_resolvent, verify_rescale_identities};
use sgspec_core::spectra::{
    analyze_spectrum, collapse_check, decomposition_check, dual_residual_check, point_spectrum,
    resolvent_map_check,
};
use sgspec_core::{
    CatalogEntry, CheckEntry, CheckReport, Complex64, ComplexMatrix, Error, GeneratorSpec,
    QuadratureConfig, SemigroupEvaluator,
};

use crate::scenario::{CheckId, LoadedInput, RunError, ScenarioConfig};

/// One check in the emitted report: the verdicts plus optional data
/// (spectra, mapped sets) for inspection.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutput {
    #[serde(flatten)]
    pub report: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl CheckOutput {
    fn plain(report: CheckReport) -> Self {
        Self {
            report,
            details: None,
        }
    }

    fn with_details(report: CheckReport, details: Value) -> Self {
        Self {
            report,
            details: Some(details),
        }
    }
}

/// Accumulates entries and notes from sub-reports under name prefixes.
struct Builder {
    entries: Vec<CheckEntry>,
    notes: Vec<String>,
}

impl Builder {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    fn absorb(&mut self, prefix: &str, report: CheckReport) {
        for mut e in report.entries {
            e.name = format!("{prefix}/{}", e.name);
            self.entries.push(e);
        }
        for n in report.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    fn finish(self, id: CheckId) -> CheckReport {
        let mut r = CheckReport::new(id.as_str(), self.entries);
        r.notes = self.notes;
        r
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn json<T: Serialize>(v: &T) -> Result<Value, RunError> {
    serde_json::to_value(v).map_err(|e| RunError::Config(e.to_string()))
}

pub fn run_check(
    id: CheckId,
    input: &LoadedInput,
    cfg: &ScenarioConfig,
) -> Result<CheckOutput, RunError> {
    let a = &input.generator;
    let s = &input.evaluator;
    let mut out = match id {
        CheckId::AnalyzeSpectrum => analyze(a, cfg.tol)?,
        CheckId::VerifyIdentities => identities(a, s, cfg)?,
        CheckId::PeriodicProjections => periodic(a, s, cfg)?,
        CheckId::PointMapping => {
            let r = point_mapping_check(a, s, &cfg.t_values, cfg.tol)?;
            let mut report = r.to_check_report();
            for row in &r.rows {
                report.entries.push(
                    CheckEntry::holds("zero_not_in_spectrum", row.removed_zeros == 0).at(row.t),
                );
            }
            CheckOutput::with_details(CheckReport::new(id.as_str(), report.entries), json(&r)?)
        }
        CheckId::ResidualMapping => {
            let r = residual_mapping_check(a, s, &cfg.t_values, cfg.tol)?;
            let mut b = Builder::new();
            b.absorb("mapping", r.to_check_report());
            b.absorb("dual", dual_residual_check(a, cfg.tol)?);
            CheckOutput::with_details(b.finish(id), json(&r)?)
        }
        CheckId::ResolventMapping => {
            let direction = random_vector(1, cfg.seed)[0];
            let angle = if direction.norm() > 0.0 {
                direction.arg()
            } else {
                0.0
            };
            let lambda = Complex64::from_polar(spectral_radius(a)? + 1.0, angle);
            let r = resolvent_map_check(a, lambda, cfg.tol)?;
            CheckOutput::with_details(
                CheckReport {
                    id: id.as_str().into(),
                    ..r
                },
                json(&json!({ "lambda": lambda }))?,
            )
        }
        CheckId::Eigenspaces => eigenspaces(a, s, cfg)?,
        CheckId::Hardy => hardy(&input.spec, cfg)?,
    };
    if input.mismatched {
        out.report
            .notes
            .push("evaluator overridden: T(t) is not generated by the given matrix".into());
    }
    if let GeneratorSpec::Catalog(CatalogEntry::DiscRotation { degree }) = &input.spec {
        let note = format!("truncated model: disc rotation at degree N = {degree}");
        if !out.report.notes.contains(&note) {
            out.report.notes.push(note);
        }
    }
    Ok(out)
}

fn analyze(a: &ComplexMatrix, tol: f64) -> Result<CheckOutput, RunError> {
    let spectrum = analyze_spectrum(a, tol)?;
    let mut b = Builder::new();
    let bound = 10.0 * tol * inf_norm(a).max(1.0);
    for (k, p) in spectrum.point.iter().enumerate() {
        let residual = p
            .eigenvectors
            .iter()
            .map(|v| vec_inf_norm(&(a * v - v * p.lambda)))
            .fold(0.0, f64::max);
        b.push(CheckEntry::at_most(
            format!("eigenpair_residual[{k}]"),
            residual,
            bound,
        ));
    }
    b.absorb("collapse", collapse_check(a, tol)?);
    b.absorb("decomposition", decomposition_check(a, tol)?);
    b.absorb("dual", dual_residual_check(a, tol)?);
    Ok(CheckOutput::with_details(
        b.finish(CheckId::AnalyzeSpectrum),
        json(&spectrum)?,
    ))
}

const RESCALE_SHIFTS: [(f64, f64); 3] = [(0.0, 0.0), (1.0, 0.0), (0.3, 0.1)];

fn identities(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    cfg: &ScenarioConfig,
) -> Result<CheckOutput, RunError> {
    let x = random_vector(s.dim(), cfg.seed);
    let x_norm = vec_inf_norm(&x);
    let mut b = Builder::new();
    for &(re, im) in &RESCALE_SHIFTS {
        let lambda = c(re, im);
        for &t in &cfg.t_values {
            let r = verify_rescale_identities(s, a, lambda, t, &x, &cfg.quadrature)?;
            let growth = inf_norm(&(s.operator(t)? * (-lambda * t).exp())).max(1.0);
            let bound = cfg.tol * (1.0 + x_norm) * growth;
            let label = fmt_c(lambda);
            b.push(
                CheckEntry::at_most(format!("rescale_outer[lambda={label}]"), r.outer, bound).at(t),
            );
            b.push(
                CheckEntry::at_most(format!("rescale_inner[lambda={label}]"), r.inner, bound).at(t),
            );
        }
    }
    for &t in &cfg.t_values {
        let lhs = s.evaluate_orbit(2.0 * t, &x)?;
        let rhs = s.evaluate_orbit(t, &s.evaluate_orbit(t, &x)?)?;
        let bound = cfg.tol * (1.0 + x_norm) * inf_norm(&s.operator(2.0 * t)?).max(1.0);
        b.push(CheckEntry::at_most("semigroup_law", vec_inf_norm(&(lhs - rhs)), bound).at(t));
    }

    // Laplace transform of the orbit at a point right of the spectrum.
    let abscissa = eigenvalues(s.generator_of())?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let lambda = c(abscissa.max(0.0) + 1.0, 0.0);
    let qtol = cfg.quadrature.tol;
    match laplace_resolvent(s, lambda, &cfg.quadrature) {
        Ok(r) => {
            let shift = identity(s.dim()) * lambda - a;
            let eye = identity(s.dim());
            let residual = inf_norm(&(&shift * &r - &eye)).max(inf_norm(&(&r * &shift - &eye)));
            b.push(CheckEntry::at_most(
                format!("laplace_resolvent[lambda={}]", fmt_c(lambda)),
                residual,
                qtol,
            ));
        }
        Err(Error::Tolerance { achieved, .. }) => {
            b.push(CheckEntry::at_most(
                format!("laplace_resolvent[lambda={}]", fmt_c(lambda)),
                achieved,
                qtol,
            ));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(CheckOutput::plain(b.finish(CheckId::VerifyIdentities)))
}

/// Smallest `t0 = 2 pi q / omega_min` (`q <= 64`) with `T(t0) = I`, if any.
fn guess_period(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    tol: f64,
) -> Result<Option<f64>, RunError> {
    let spectrum = eigenvalues(a)?;
    let scale = inf_norm(a).max(1.0);
    if spectrum.iter().any(|z| z.re.abs() > tol * scale) {
        return Ok(None);
    }
    let omega_min = spectrum
        .iter()
        .map(|z| z.im.abs())
        .filter(|w| *w > tol * scale)
        .fold(f64::INFINITY, f64::min);
    let eye = identity(s.dim());
    if !omega_min.is_finite() {
        return Ok((inf_norm(&(s.operator(1.0)? - &eye)) <= tol).then_some(1.0));
    }
    for q in 1..=64 {
        let t0 = 2.0 * PI * q as f64 / omega_min;
        if inf_norm(&(s.operator(t0)? - &eye)) <= tol * scale.max(t0) {
            return Ok(Some(t0));
        }
    }
    Ok(None)
}

fn periodic(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    cfg: &ScenarioConfig,
) -> Result<CheckOutput, RunError> {
    let tol = cfg.tol;
    let id = CheckId::PeriodicProjections;
    let mut b = Builder::new();
    let candidate = match cfg.period_hint {
        Some(h) => Some(h),
        None => guess_period(a, s, tol)?,
    };
    let Some(t0) = candidate else {
        b.push(CheckEntry::holds("period_found", false));
        b.note("no t0 <= 64 * 2 pi / min|Im sigma| with T(t0) = I; the semigroup does not look periodic");
        return Ok(CheckOutput::plain(b.finish(id)));
    };
    let detect_tol = tol * inf_norm(a).max(1.0).max(t0);
    let rho = match detect_period(s, t0, 64, detect_tol) {
        Ok(0.0) => {
            b.note("T(t) = I for all sampled t: trivial semigroup, projections taken over [0, 1]");
            1.0
        }
        Ok(rho) => rho,
        Err(Error::NotAPeriod { residual, .. }) => {
            b.push(CheckEntry::at_most("hint_is_period", residual, detect_tol));
            return Ok(CheckOutput::plain(b.finish(id)));
        }
        Err(e) => return Err(e.into()),
    };
    b.push(CheckEntry::holds("period_found", true));

    let limit = 2.0 * PI / rho;
    let mut qcfg: QuadratureConfig = cfg.quadrature.clone();
    if qcfg.contour_radius >= limit {
        qcfg.contour_radius = 0.5 * limit;
        b.note(format!(
            "contour radius reduced to {:.6} to stay below the lattice spacing",
            qcfg.contour_radius
        ));
    }
    let fam = projection_family(s, rho, &qcfg, tol)?;
    b.absorb("family", projection_family_checks(&fam, a, tol)?);
    for e in &fam.entries {
        let residue = &laurent_coefficients(s, rho, e.n, 0, &qcfg)?[0];
        b.push(CheckEntry::at_most(
            format!("laurent_residue[n={}]", e.n),
            projection_distance(residue, &e.projection),
            tol,
        ));
    }
    for &t in &cfg.t_values {
        let d = inf_norm(&(fourier_reconstruct_t(&fam, t) - s.operator(t)?));
        b.push(CheckEntry::at_most("fourier_orbit", d, tol).at(t));
    }
    b.push(CheckEntry::at_most(
        "fourier_generator",
        inf_norm(&(fourier_reconstruct_a(&fam) - a)),
        tol * inf_norm(a).max(1.0),
    ));
    let (lo, hi) = fam.n_range();
    Ok(CheckOutput::with_details(
        b.finish(id),
        json(
            &json!({ "period": rho, "n_min": lo, "n_max": hi, "contour_radius": qcfg.contour_radius }),
        )?,
    ))
}

fn eigenspaces(
    a: &ComplexMatrix,
    s: &SemigroupEvaluator,
    cfg: &ScenarioConfig,
) -> Result<CheckOutput, RunError> {
    let mut b = Builder::new();
    let mut dims = Vec::new();
    for p in point_spectrum(a, cfg.tol)? {
        let r = eigenspace_intersection_check(a, s, p.lambda, &DEFAULT_T_GRID, cfg.tol)?;
        dims.push(json!({ "lambda": p.lambda, "generator": r.dim_generator, "intersection": r.dim_semigroup }));
        b.absorb("intersection", r.to_check_report());
        for &t in cfg.t_values.iter().filter(|t| **t > 0.0) {
            let u = eigenspace_union_check(a, s, p.lambda, t, None, cfg.tol)?;
            let mut report = u.to_check_report();
            for e in &mut report.entries {
                e.t = Some(t);
            }
            b.absorb("union", report);
        }
    }
    if cfg.t_values.contains(&0.0) {
        b.note("union check skipped at t = 0 (the lattice spacing 2 pi / t is undefined)");
    }
    Ok(CheckOutput::with_details(
        b.finish(CheckId::Eigenspaces),
        json(&dims)?,
    ))
}

const HARDY_DEFAULT_DEGREE: usize = 8;
const HARDY_SAMPLES: u64 = 5;

fn hardy(spec: &GeneratorSpec, cfg: &ScenarioConfig) -> Result<CheckOutput, RunError> {
    let mut b = Builder::new();
    let degree = match spec {
        GeneratorSpec::Catalog(CatalogEntry::DiscRotation { degree }) if *degree >= 1 => *degree,
        _ => {
            b.note(format!(
                "input is not a disc rotation of degree >= 1; the example runs at N = {HARDY_DEFAULT_DEGREE}"
            ));
            HARDY_DEFAULT_DEGREE
        }
    };
    b.absorb("spectrum", verify_hardy_spectrum(degree, cfg.tol)?);
    let qcfg = QuadratureConfig {
        tol: cfg.tol,
        ..cfg.quadrature.clone()
    };
    let mut first = None;
    for k in 0..HARDY_SAMPLES {
        let g = DiscFunction::new(
            random_vector(degree + 1, cfg.seed.wrapping_add(k))
                .iter()
                .copied()
                .collect(),
        )?;
        for n in 0..=degree {
            b.absorb(
                &format!("projection[g={k}]"),
                hardy_projection_check(degree, n, &g, &qcfg)?,
            );
        }
        first.get_or_insert(g);
    }
    let g = first.expect("at least one sample");
    let nu = WeightFunction::linear_decay(16)?;
    let doubled = WeightFunction::new(
        nu.samples.iter().map(|(z, v)| (*z, 2.0 * v)).collect(),
        true,
    )?;
    let (low, high) = (
        weighted_seminorm(&g, &nu)?,
        weighted_seminorm(&g, &doubled)?,
    );
    b.push(CheckEntry::holds("seminorm_monotone", high >= low));
    Ok(CheckOutput::with_details(
        b.finish(CheckId::Hardy),
        json(
            &json!({ "degree": degree, "seminorm_lower_bound": low, "weight_samples": nu.samples.len() }),
        )?,
    ))
}
