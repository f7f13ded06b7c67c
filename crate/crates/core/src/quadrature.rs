//! Integrals of semigroup orbits.
//!
//! Three kinds of integral are needed: finite orbit integrals
//! `int_0^t e^{-lambda s} T(s)x ds` (composite rules), truncated Laplace
//! transforms `int_0^inf e^{-lambda s} T(s) ds` giving the resolvent, and
//! contour integrals `(1/2 pi i) oint f(lambda) d lambda` over circles
//! (trapezoid rule in the angle). Sums are always accumulated in node
//! order, so results are bit-for-bit reproducible.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, identity, inf_norm, min_distance, shifted, vec_inf_norm};
use crate::semigroup::SemigroupEvaluator;
use crate::{ComplexMatrix, ComplexVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitScheme {
    Trapezoid,
    Simpson,
    /// Five-point Gauss-Legendre on every panel.
    Gauss,
}

/// Truncation horizon of the Laplace integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    Auto,
    Fixed(f64),
}

impl Serialize for Horizon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Horizon::Auto => s.serialize_str("auto"),
            Horizon::Fixed(h) => s.serialize_f64(*h),
        }
    }
}

impl<'de> Deserialize<'de> for Horizon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(h) => Ok(Horizon::Fixed(h)),
            Repr::Word(w) if w == "auto" => Ok(Horizon::Auto),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "laplace_horizon must be a number or \"auto\", got \"{w}\""
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Panels of the composite rule on `[0, t]`.
    pub orbit_nodes: usize,
    pub orbit_scheme: OrbitScheme,
    pub laplace_horizon: Horizon,
    pub laplace_tail_tol: f64,
    /// Nodes of every periodic trapezoid rule: circle contours and
    /// averages over one full period.
    pub contour_nodes: usize,
    pub contour_radius: f64,
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            orbit_nodes: 512,
            orbit_scheme: OrbitScheme::Simpson,
            laplace_horizon: Horizon::Auto,
            laplace_tail_tol: 1e-10,
            contour_nodes: 64,
            contour_radius: 0.5,
            tol: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.orbit_nodes < 2 {
            return bad("orbit_nodes must be >= 2");
        }
        if self.contour_nodes < 8 {
            return bad("contour_nodes must be >= 8");
        }
        for (name, v) in [
            ("laplace_tail_tol", self.laplace_tail_tol),
            ("contour_radius", self.contour_radius),
            ("tol", self.tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        if let Horizon::Fixed(h) = self.laplace_horizon {
            if !(h.is_finite() && h > 0.0) {
                return bad("laplace_horizon must be > 0");
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Nodes and weights of the composite rule on `[0, t]`.
pub fn rule(t: f64, panels: usize, scheme: OrbitScheme) -> Vec<(f64, f64)> {
    let h = t / panels as f64;
    match scheme {
        OrbitScheme::Trapezoid => (0..=panels)
            .map(|j| {
                let w = if j == 0 || j == panels { h / 2.0 } else { h };
                (j as f64 * h, w)
            })
            .collect(),
        OrbitScheme::Simpson => (0..=2 * panels)
            .map(|j| {
                let w = if j == 0 || j == 2 * panels {
                    h / 6.0
                } else if j % 2 == 1 {
                    4.0 * h / 6.0
                } else {
                    2.0 * h / 6.0
                };
                (j as f64 * h / 2.0, w)
            })
            .collect(),
        OrbitScheme::Gauss => (0..panels)
            .flat_map(|p| {
                let mid = (p as f64 + 0.5) * h;
                GAUSS5
                    .iter()
                    .map(move |&(x, w)| (mid + x * h / 2.0, w * h / 2.0))
            })
            .collect(),
    }
}

/// `T(s)` tabulated on the nodes of a rule, reusable for many `lambda`.
#[derive(Clone, Debug)]
pub struct OrbitSamples {
    nodes: Vec<(f64, f64)>,
    ops: Vec<ComplexMatrix>,
}

impl OrbitSamples {
    pub fn new(s: &SemigroupEvaluator, t: f64, panels: usize, scheme: OrbitScheme) -> Result<Self> {
        let nodes = rule(t, panels, scheme);
        let ops = nodes
            .iter()
            .map(|&(x, _)| s.operator(x))
            .collect::<Result<_>>()?;
        Ok(Self { nodes, ops })
    }

    /// `sum_j w_j e^{-lambda s_j} T(s_j)`.
    pub fn laplace(&self, lambda: Complex64) -> ComplexMatrix {
        let n = self.ops[0].nrows();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (&(s, w), op) in self.nodes.iter().zip(&self.ops) {
            acc += op * ((-lambda * s).exp() * w);
        }
        acc
    }
}

/// `int_0^t e^{-lambda s} T(s)x ds` by the configured composite rule.
pub fn orbit_integral(
    s: &SemigroupEvaluator,
    lambda: Complex64,
    t: f64,
    x: &ComplexVector,
    cfg: &QuadratureConfig,
) -> Result<ComplexVector> {
    if x.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            actual: x.len(),
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "orbit integral needs t >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(ComplexVector::zeros(x.len()));
    }
    let mut acc = ComplexVector::zeros(x.len());
    for (node, w) in rule(t, cfg.orbit_nodes, cfg.orbit_scheme) {
        acc += s.evaluate_orbit(node, x)? * ((-lambda * node).exp() * w);
    }
    Ok(acc)
}

/// `int_0^t e^{-lambda s} T(s) ds` as a matrix.
pub fn orbit_integral_matrix(
    s: &SemigroupEvaluator,
    lambda: Complex64,
    t: f64,
    panels: usize,
    scheme: OrbitScheme,
) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(ComplexMatrix::zeros(s.dim(), s.dim()));
    }
    Ok(OrbitSamples::new(s, t, panels, scheme)?.laplace(lambda))
}

/// Residuals of the two integrated forms of the rescaled orbit:
/// the operator applied outside the integral, and inside it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaleResiduals {
    /// `|e^{-lt}T(t)x - x - (A - l) int_0^t e^{-ls}T(s)x ds|`
    pub outer: f64,
    /// `|e^{-lt}T(t)x - x - int_0^t e^{-ls}T(s)(A - l)x ds|`
    pub inner: f64,
}

pub fn verify_rescale_identities(
    s: &SemigroupEvaluator,
    a: &ComplexMatrix,
    lambda: Complex64,
    t: f64,
    x: &ComplexVector,
    cfg: &QuadratureConfig,
) -> Result<RescaleResiduals> {
    if a.nrows() != s.dim() || a.ncols() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            actual: a.nrows(),
        });
    }
    if x.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            actual: x.len(),
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "orbit integral needs t >= 0, got {t}"
        )));
    }
    // Both integrals share the nodes, so T(s) is tabulated once.
    let integral = orbit_integral_matrix(s, lambda, t, cfg.orbit_nodes, cfg.orbit_scheme)?;
    let a_shift = a - identity(s.dim()) * lambda;
    let lhs = s.evaluate_orbit(t, x)? * (-lambda * t).exp() - x;
    let outer = &lhs - &a_shift * (&integral * x);
    let inner = &lhs - &integral * (&a_shift * x);
    Ok(RescaleResiduals {
        outer: vec_inf_norm(&outer),
        inner: vec_inf_norm(&inner),
    })
}

/// Distance below which `lambda` counts as touching the spectrum.
pub const SPECTRUM_GUARD: f64 = 1e-8;

/// Doublings of the panel count tried before giving up on `cfg.tol`.
const MAX_REFINEMENTS: u32 = 6;

/// Growth steps of the automatic Laplace horizon.
const MAX_HORIZON_EXTENSIONS: u32 = 16;

/// Horizon at which `e^{(a - Re l) H} / (Re l - a)` drops to `tail_tol`.
pub fn laplace_auto_horizon(gap: f64, tail_tol: f64) -> f64 {
    ((1.0 / (tail_tol * gap)).ln() / gap).max(1.0 / gap)
}

/// `R(lambda, A) = int_0^inf e^{-lambda s} T(s) ds`, truncated.
///
/// The horizon comes from the spectral abscissa of the generator (or is
/// fixed by the config). The composite rule is refined by doubling until
/// `(lambda - A)R = I` holds on both sides to `cfg.tol`.
pub fn laplace_resolvent(
    s: &SemigroupEvaluator,
    lambda: Complex64,
    cfg: &QuadratureConfig,
) -> Result<ComplexMatrix> {
    cfg.validate()?;
    let a = s.generator_of();
    let spectrum = eigenvalues(a)?;
    let abscissa = spectrum
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if lambda.re <= abscissa {
        return Err(Error::Divergent {
            re_lambda: lambda.re,
            abscissa,
        });
    }
    let distance = min_distance(lambda, &spectrum);
    if distance < SPECTRUM_GUARD {
        return Err(Error::NearSpectrum { distance });
    }
    let horizon = match cfg.laplace_horizon {
        Horizon::Fixed(h) => h,
        Horizon::Auto => {
            let gap = lambda.re - abscissa;
            let mut h = laplace_auto_horizon(gap, cfg.laplace_tail_tol);
            // The dropped tail is e^{-lambda H} T(H) R(lambda); non-normal
            // generators grow polynomially on top of e^{aH}, so extend H
            // until the tail factor itself is small.
            for _ in 0..MAX_HORIZON_EXTENSIONS {
                let tail = inf_norm(&s.operator(h)?) * (-lambda.re * h).exp() / gap;
                if tail <= cfg.laplace_tail_tol {
                    break;
                }
                h *= 1.5;
            }
            h
        }
    };
    let shift = shifted(a, lambda);
    let eye = identity(s.dim());
    let mut panels = cfg.orbit_nodes;
    let mut achieved = f64::INFINITY;
    for _ in 0..=MAX_REFINEMENTS {
        let r = orbit_integral_matrix(s, lambda, horizon, panels, cfg.orbit_scheme)?;
        let left = inf_norm(&(&shift * &r - &eye));
        let right = inf_norm(&(&r * &shift - &eye));
        achieved = left.max(right);
        if achieved <= cfg.tol {
            return Ok(r);
        }
        panels *= 2;
    }
    Err(Error::Tolerance {
        what: format!("Laplace resolvent at {lambda} (horizon {horizon:.3})"),
        achieved,
        target: cfg.tol,
    })
}

/// Trapezoid nodes on the positively oriented circle, paired with the
/// factor turning `f(lambda)` into a term of `(1/2 pi i) oint f d lambda`.
pub fn circle_nodes(
    center: Complex64,
    radius: f64,
    n_nodes: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParams(format!(
            "contour radius must be > 0, got {radius}"
        )));
    }
    if n_nodes < 8 {
        return Err(Error::InvalidParams(format!(
            "contour needs >= 8 nodes, got {n_nodes}"
        )));
    }
    Ok((0..n_nodes)
        .map(|j| {
            let offset = Complex64::from_polar(radius, 2.0 * PI * j as f64 / n_nodes as f64);
            // d lambda = i r e^{i theta} d theta, and the 1/(2 pi i) cancels the i
            (center + offset, offset / n_nodes as f64)
        })
        .collect())
}

/// `(1/2 pi i) oint_{|lambda - center| = radius} f(lambda) d lambda`.
pub fn contour_integral_circle<T, F>(
    mut f: F,
    center: Complex64,
    radius: f64,
    n_nodes: usize,
) -> Result<T>
where
    T: std::ops::AddAssign + std::ops::Mul<Complex64, Output = T>,
    F: FnMut(Complex64) -> Result<T>,
{
    let mut acc: Option<T> = None;
    for (lambda, weight) in circle_nodes(center, radius, n_nodes)? {
        let term = f(lambda)? * weight;
        match acc.as_mut() {
            Some(a) => *a += term,
            None => acc = Some(term),
        }
    }
    Ok(acc.expect("at least eight nodes"))
}
