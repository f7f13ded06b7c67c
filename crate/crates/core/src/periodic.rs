//! Periodic semigroups: period detection, averaging projections, the
//! periodic resolvent, Laurent coefficients at the poles `2 pi i n / rho`,
//! and the finite Fourier expansions of `T(t)` and `A`.
//!
//! Integrals over one full period use the trapezoid rule with
//! `cfg.contour_nodes` nodes; the integrand is periodic there, so the rule
//! is exact for trigonometric polynomials of degree below the node count.
//! The resolvent integrand `e^{-mu s}T(s)` is not periodic and goes through
//! the configured composite orbit rule instead.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::matrix_exp;
use crate::linalg::{
    column_space, columns_to_matrix, frobenius, identity, inf_norm, null_space, principal_angle,
    rank, scaled, shifted, spectral_norm,
};
use crate::quadrature::{circle_nodes, OrbitSamples, QuadratureConfig};
use crate::report::{CheckEntry, CheckReport};
use crate::semigroup::SemigroupEvaluator;
use crate::spectra::point_spectrum;
use crate::ComplexMatrix;

/// Grid points on `(0, t0]` for the trivial-semigroup test. The offsets are
/// irrational fractions of `t0`, so none of them is a multiple of a
/// nontrivial period `t0 / k`.
const TRIVIAL_GRID: usize = 64;
const GOLDEN_OFFSET: f64 = 0.618_033_988_749_894_9;

/// `mu_n = 2 pi i n / rho`.
pub fn lattice_point(rho: f64, n: i64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * n as f64 / rho)
}

fn deviation_from_identity(s: &SemigroupEvaluator, t: f64) -> Result<f64> {
    Ok(inf_norm(&(s.operator(t)? - identity(s.dim()))))
}

/// Smallest period of the form `t0 / k`, `k <= k_max`. Returns `0.0` when
/// the semigroup is the identity on a fine grid of `(0, t0]`.
pub fn detect_period(s: &SemigroupEvaluator, t0: f64, k_max: usize, tol: f64) -> Result<f64> {
    if !(t0.is_finite() && t0 > 0.0) || k_max == 0 {
        return Err(Error::InvalidParams(format!(
            "detect_period needs t0 > 0 and k_max >= 1, got t0 = {t0}, k_max = {k_max}"
        )));
    }
    let residual = deviation_from_identity(s, t0)?;
    if residual > tol {
        return Err(Error::NotAPeriod { t0, residual });
    }
    let mut trivial = true;
    for j in 0..TRIVIAL_GRID {
        let t = t0 * (j as f64 + GOLDEN_OFFSET) / TRIVIAL_GRID as f64;
        if deviation_from_identity(s, t)? > tol {
            trivial = false;
            break;
        }
    }
    if trivial {
        return Ok(0.0);
    }
    for k in (1..=k_max).rev() {
        if deviation_from_identity(s, t0 / k as f64)? <= tol {
            return Ok(t0 / k as f64);
        }
    }
    Ok(t0)
}

fn require_period(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "periodic operations need rho > 0, got {rho}"
        )))
    }
}

/// `T(j rho / M)`, `j = 0..M`, for averaging over one period.
struct PeriodGrid {
    period: f64,
    ops: Vec<ComplexMatrix>,
}

impl PeriodGrid {
    fn new(s: &SemigroupEvaluator, rho: f64, nodes: usize) -> Result<Self> {
        require_period(rho)?;
        let ops = (0..nodes)
            .map(|j| s.operator(rho * j as f64 / nodes as f64))
            .collect::<Result<_>>()?;
        Ok(Self { period: rho, ops })
    }

    /// `(1/rho) int_0^rho e^{-mu_n s} T(s) ds` by the periodic trapezoid rule.
    fn projection(&self, n: i64) -> ComplexMatrix {
        let m = self.ops.len();
        let dim = self.ops[0].nrows();
        let mu = lattice_point(self.period, n);
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (j, op) in self.ops.iter().enumerate() {
            let s = self.period * j as f64 / m as f64;
            acc += op * ((-mu * s).exp() / m as f64);
        }
        acc
    }
}

/// `P_n = (1/rho) int_0^rho e^{-mu_n s} T(s) ds`.
pub fn spectral_projection(
    s: &SemigroupEvaluator,
    rho: f64,
    n: i64,
    cfg: &QuadratureConfig,
) -> Result<ComplexMatrix> {
    Ok(PeriodGrid::new(s, rho, cfg.contour_nodes)?.projection(n))
}

/// Minimal `|1 - e^{-mu rho}|` accepted by the periodic resolvent.
pub const LATTICE_GUARD: f64 = 1e-8;

/// `R(mu, A) = (1 - e^{-mu rho})^{-1} int_0^rho e^{-mu s} T(s) ds`.
pub fn periodic_resolvent(
    s: &SemigroupEvaluator,
    rho: f64,
    mu: Complex64,
    cfg: &QuadratureConfig,
) -> Result<ComplexMatrix> {
    require_period(rho)?;
    let denom = 1.0 - (-mu * rho).exp();
    if denom.norm() <= LATTICE_GUARD {
        return Err(Error::NearLattice {
            distance: denom.norm(),
        });
    }
    let samples = OrbitSamples::new(s, rho, cfg.orbit_nodes, cfg.orbit_scheme)?;
    Ok(samples.laplace(mu) / denom)
}

/// Laurent coefficients `a_{k,n}`, `k = -1..=k_max`, of the resolvent
/// around `mu_n`, as circle integrals of the periodic resolvent of radius
/// `cfg.contour_radius`. Index `0` of the result holds `a_{-1,n}`.
pub fn laurent_coefficients(
    s: &SemigroupEvaluator,
    rho: f64,
    n: i64,
    k_max: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<ComplexMatrix>> {
    require_period(rho)?;
    let limit = 2.0 * PI / rho;
    let radius = cfg.contour_radius;
    if !(radius > 0.0 && radius < limit) {
        return Err(Error::RadiusOutOfRange { radius, limit });
    }
    let center = lattice_point(rho, n);
    let samples = OrbitSamples::new(s, rho, cfg.orbit_nodes, cfg.orbit_scheme)?;
    let nodes = circle_nodes(center, radius, cfg.contour_nodes)?;
    let resolvents: Vec<ComplexMatrix> = nodes
        .iter()
        .map(|&(lambda, _)| samples.laplace(lambda) / (1.0 - (-lambda * rho).exp()))
        .collect();

    let dim = s.dim();
    let mut coeffs = Vec::with_capacity(k_max + 2);
    for k in -1..=(k_max as i32) {
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (&(lambda, weight), r) in nodes.iter().zip(&resolvents) {
            acc += r * (weight * (lambda - center).powi(-(k + 1)));
        }
        coeffs.push(acc);
    }
    Ok(coeffs)
}

/// `sum_{k=-1}^{K} a_k offset^k` for coefficients as returned by
/// [`laurent_coefficients`].
pub fn laurent_partial_sum(coeffs: &[ComplexMatrix], offset: Complex64) -> ComplexMatrix {
    let dim = coeffs[0].nrows();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (idx, a) in coeffs.iter().enumerate() {
        acc += a * offset.powi(idx as i32 - 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionEntry {
    pub n: i64,
    pub mu: Complex64,
    #[serde(rename = "P", with = "crate::io::matrix_rows")]
    pub projection: ComplexMatrix,
}

/// Spectral projections `P_n`, `-m <= n <= m`, of a periodic semigroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionFamily {
    pub period: f64,
    pub entries: Vec<ProjectionEntry>,
}

impl ProjectionFamily {
    pub fn new(period: f64, mut entries: Vec<ProjectionEntry>) -> Result<Self> {
        require_period(period)?;
        entries.sort_by_key(|e| e.n);
        Ok(Self { period, entries })
    }

    /// `(-m, m)` for the stored indices.
    pub fn n_range(&self) -> (i64, i64) {
        let lo = self.entries.first().map_or(0, |e| e.n);
        let hi = self.entries.last().map_or(0, |e| e.n);
        (lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.entries.first().map_or(0, |e| e.projection.nrows())
    }

    pub fn get(&self, n: i64) -> Option<&ComplexMatrix> {
        self.entries
            .iter()
            .find(|e| e.n == n)
            .map(|e| &e.projection)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fam: Self = serde_json::from_str(text)?;
        Self::new(fam.period, fam.entries)
    }
}

/// Projections for `|n| <= m` with `m` the smallest index at which
/// `sum P_n = I` holds to `tol`. `m` is capped so the trapezoid rule keeps
/// at least `4(m + 1)` nodes.
pub fn projection_family(
    s: &SemigroupEvaluator,
    rho: f64,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<ProjectionFamily> {
    let grid = PeriodGrid::new(s, rho, cfg.contour_nodes)?;
    let m_cap = (cfg.contour_nodes / 4).saturating_sub(1) as i64;
    let eye = identity(s.dim());
    let mut entries = Vec::new();
    let mut sum = ComplexMatrix::zeros(s.dim(), s.dim());
    let mut m = 0i64;
    loop {
        let indices: Vec<i64> = if m == 0 { vec![0] } else { vec![-m, m] };
        for n in indices {
            let p = grid.projection(n);
            sum += &p;
            entries.push(ProjectionEntry {
                n,
                mu: lattice_point(rho, n),
                projection: p,
            });
        }
        let gap = inf_norm(&(&sum - &eye));
        if gap <= tol {
            return ProjectionFamily::new(rho, entries);
        }
        if m >= m_cap {
            return Err(Error::Tolerance {
                what: format!("projection family completeness with m <= {m_cap}"),
                achieved: gap,
                target: tol,
            });
        }
        m += 1;
    }
}

/// `sum_n e^{mu_n t} P_n`.
pub fn fourier_reconstruct_t(fam: &ProjectionFamily, t: f64) -> ComplexMatrix {
    let dim = fam.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for e in &fam.entries {
        acc += &e.projection * (e.mu * t).exp();
    }
    acc
}

/// `sum_n mu_n P_n`.
pub fn fourier_reconstruct_a(fam: &ProjectionFamily) -> ComplexMatrix {
    let dim = fam.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for e in &fam.entries {
        acc += &e.projection * e.mu;
    }
    acc
}

/// Number of points of the `t`-grid used to test `T(t)P_n = e^{mu_n t}P_n`.
const INVARIANCE_GRID: usize = 8;

/// Idempotence, mutual annihilation, completeness, `ran P_n = ker(mu_n - A)`
/// and `T(t)P_n = e^{mu_n t} P_n`. Failures are reported per entry.
pub fn projection_family_checks(
    fam: &ProjectionFamily,
    a: &ComplexMatrix,
    tol: f64,
) -> Result<CheckReport> {
    let dim = fam.dim();
    if a.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: a.nrows(),
        });
    }
    let mut entries = Vec::new();
    for e in &fam.entries {
        let p = &e.projection;
        entries.push(CheckEntry::at_most(
            format!("idempotent[n={}]", e.n),
            inf_norm(&(p * p - p)),
            tol,
        ));
    }
    let mut cross = 0.0f64;
    for (i, e) in fam.entries.iter().enumerate() {
        for f in fam.entries.iter().skip(i + 1) {
            cross = cross
                .max(inf_norm(&(&e.projection * &f.projection)))
                .max(inf_norm(&(&f.projection * &e.projection)));
        }
    }
    entries.push(CheckEntry::at_most("mutually_annihilating", cross, tol));
    let sum = fam
        .entries
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, e| acc + &e.projection);
    entries.push(CheckEntry::at_most(
        "sum_is_identity",
        inf_norm(&(sum - identity(dim))),
        tol,
    ));

    for e in &fam.entries {
        let range = column_space(&e.projection, scaled(tol, &e.projection));
        let kernel = null_space(&shifted(a, e.mu), scaled(tol, a));
        let mut entry = CheckEntry::at_most(
            format!("range_is_kernel[n={}]", e.n),
            principal_angle(&range, &kernel),
            tol,
        );
        if range.ncols() != kernel.ncols() {
            entry.name = format!(
                "{} (dims {} vs {})",
                entry.name,
                range.ncols(),
                kernel.ncols()
            );
        }
        entries.push(entry);
    }

    let mut invariance = 0.0f64;
    for j in 0..INVARIANCE_GRID {
        let t = fam.period * j as f64 / INVARIANCE_GRID as f64;
        let op = matrix_exp(a, t)?;
        for e in &fam.entries {
            let d = &op * &e.projection - &e.projection * (e.mu * t).exp();
            invariance = invariance.max(inf_norm(&d));
        }
    }
    entries.push(CheckEntry::at_most("orbit_invariance", invariance, tol));
    Ok(CheckReport::new("projection-family", entries))
}

/// Sufficient condition for periodicity: `sigma_p(A)` inside
/// `2 pi i alpha Z` and eigenvectors spanning `C^n`. When both hold, the
/// claim `T(1/alpha) = I` is verified as well; otherwise no claim is made.
pub fn periodicity_criterion_check(a: &ComplexMatrix, alpha: f64, tol: f64) -> Result<CheckReport> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParams(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    let pairs = point_spectrum(a, tol)?;
    let step = 2.0 * PI * alpha;
    let mut entries = Vec::new();
    let mut lattice_ok = true;
    for (k, p) in pairs.iter().enumerate() {
        let nearest = Complex64::new(0.0, step * (p.lambda.im / step).round());
        let d = (p.lambda - nearest).norm();
        let entry = CheckEntry::at_most(
            format!("eigenvalue_on_lattice[{k}]"),
            d,
            tol * p.lambda.norm().max(1.0),
        );
        lattice_ok &= entry.verdict.is_pass();
        entries.push(entry);
    }
    let vectors: Vec<_> = pairs
        .iter()
        .flat_map(|p| p.eigenvectors.iter().cloned())
        .collect();
    let stacked = columns_to_matrix(a.nrows(), &vectors);
    let span = if stacked.ncols() == 0 {
        0
    } else {
        rank(&stacked, tol * spectral_norm(&stacked).max(1.0))
    };
    let span_ok = span == a.nrows();
    entries.push(CheckEntry {
        value: span as f64,
        threshold: a.nrows() as f64,
        ..CheckEntry::holds("eigenvectors_span", span_ok)
    });
    if lattice_ok && span_ok {
        let deviation = inf_norm(&(matrix_exp(a, 1.0 / alpha)? - identity(a.nrows())));
        entries.push(CheckEntry::at_most(
            "period_divides_inverse_alpha",
            deviation,
            tol,
        ));
        Ok(CheckReport::new("periodicity-criterion", entries))
    } else {
        Ok(CheckReport::new("periodicity-criterion", entries)
            .with_note("criterion not met: no periodicity claim"))
    }
}

/// Frobenius distance between two projections, for cross-route comparisons.
pub fn projection_distance(p: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    frobenius(&(p - q))
}
