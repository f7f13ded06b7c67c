//! Spectral sets of a matrix, each computed by its own criterion.
//!
//! In finite dimension the point, residual, approximate and algebraic
//! spectra all coincide and the topological spectrum is empty. They are
//! still computed separately (kernel of `lambda - A`, rank of its range,
//! smallest singular value, column-pivoted QR) so that the coincidences
//! are checked rather than assumed. Candidate points come from the
//! eigenvalues of both `A` and its transpose; no attempt is made to scan
//! the plane.
//!
//! The dual operator is the plain transpose: the pairing `<x', Ax>` is
//! bilinear, not sesquilinear.

pub mod oracle;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    check_square, cluster, distinct, eigenvalues, hausdorff, inf_norm, inverse, min_distance,
    null_space, principal_angle, scaled, shifted, sigma_min, singular_values, transpose,
};
use crate::report::{CheckEntry, CheckReport};
use crate::{ComplexMatrix, ComplexVector};

pub use oracle::brute_force_eigen_oracle;

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub lambda: Complex64,
    /// Algebraic multiplicity: size of the eigenvalue cluster.
    pub multiplicity: usize,
    /// Basis of the eigenspace, each vector scaled to unit max-modulus with
    /// its largest component real and positive.
    pub eigenvectors: Vec<ComplexVector>,
}

impl Serialize for Eigenpair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lambda: Complex64,
            mult: usize,
            geometric: usize,
        }
        Repr {
            lambda: self.lambda,
            mult: self.multiplicity,
            geometric: self.eigenvectors.len(),
        }
        .serialize(s)
    }
}

/// All spectral sets of one matrix, sorted lexicographically by `(re, im)`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub point: Vec<Eigenpair>,
    pub residual: Vec<Complex64>,
    pub approximate: Vec<Complex64>,
    pub algebraic: Vec<Complex64>,
    pub topological: Vec<Complex64>,
    pub tol: f64,
}

impl SpectrumReport {
    pub fn point_values(&self) -> Vec<Complex64> {
        self.point.iter().map(|p| p.lambda).collect()
    }
}

fn normalize(mut v: ComplexVector) -> ComplexVector {
    let (idx, max) = v.iter().enumerate().fold((0, 0.0), |(bi, bm), (i, z)| {
        if z.norm() > bm {
            (i, z.norm())
        } else {
            (bi, bm)
        }
    });
    if max > 0.0 {
        let phase = v[idx].conj() / (max * max);
        v *= phase;
    }
    v
}

/// Clustering radius for eigenvalues of `a`.
fn merge_radius(a: &ComplexMatrix, tol: f64) -> f64 {
    scaled(tol, a)
}

/// Eigenvalues clustered into distinct values with multiplicities, each
/// with a basis of its eigenspace.
pub fn point_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Eigenpair>> {
    check_square(a)?;
    let threshold = scaled(tol, a);
    let groups = cluster(&eigenvalues(a)?, merge_radius(a, tol));
    Ok(groups
        .into_iter()
        .map(|(lambda, multiplicity)| {
            let shifted = shifted(a, lambda);
            let mut kernel = null_space(&shifted, threshold);
            if kernel.ncols() == 0 {
                // rounding pushed sigma_min over the threshold; keep the
                // best available direction so the eigenvalue has a vector
                kernel = null_space(&shifted, sigma_min(&shifted));
            }
            let eigenvectors = kernel
                .column_iter()
                .map(|col| normalize(col.into_owned()))
                .collect();
            Eigenpair {
                lambda,
                multiplicity,
                eigenvectors,
            }
        })
        .collect())
}

pub fn point_values(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    Ok(point_spectrum(a, tol)?
        .into_iter()
        .map(|p| p.lambda)
        .collect())
}

/// Candidate points: eigenvalues of `A` and of `A^T`, merged.
fn candidates(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let mut all = eigenvalues(a)?;
    all.extend(eigenvalues(&transpose(a))?);
    Ok(distinct(&all, merge_radius(a, tol)))
}

/// `ran(lambda - A)` is not dense: in finite dimension, `rank < dim`.
pub fn residual_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let n = check_square(a)?;
    let threshold = scaled(tol, a);
    Ok(candidates(a, tol)?
        .into_iter()
        .filter(|&z| {
            let rank = singular_values(&shifted(a, z))
                .iter()
                .filter(|&&s| s > threshold)
                .count();
            rank < n
        })
        .collect())
}

/// The residual spectrum by the dual route: the point spectrum of `A^T`.
pub fn residual_via_transpose(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    point_values(&transpose(a), tol)
}

/// `{lambda : sigma_min(lambda - A) <= tol max(1, |A|)}` over the candidates.
pub fn approximate_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let threshold = scaled(tol, a);
    Ok(candidates(a, tol)?
        .into_iter()
        .filter(|&z| sigma_min(&shifted(a, z)) <= threshold)
        .collect())
}

/// `lambda - A` is not injective or has non-closed range; ranges are
/// closed in finite dimension, so this is a nontrivial kernel.
pub fn a_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let threshold = scaled(tol, a);
    Ok(candidates(a, tol)?
        .into_iter()
        .filter(|&z| null_space(&shifted(a, z), threshold).ncols() > 0)
        .collect())
}

fn qr_min_pivot(m: &ComplexMatrix) -> f64 {
    let r = m.clone().col_piv_qr().r();
    (0..r.nrows().min(r.ncols()))
        .map(|i| r[(i, i)].norm())
        .fold(f64::INFINITY, f64::min)
}

/// `lambda - A` is not bijective, detected by column-pivoted QR.
pub fn algebraic_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let threshold = scaled(tol, a);
    Ok(candidates(a, tol)?
        .into_iter()
        .filter(|&z| qr_min_pivot(&shifted(a, z)) <= threshold)
        .collect())
}

/// `lambda - A` bijective with an unbounded inverse. Any inverse of a
/// matrix is bounded, so this only collects candidates where inversion
/// produced non-finite numbers.
pub fn topological_spectrum(a: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let threshold = scaled(tol, a);
    Ok(candidates(a, tol)?
        .into_iter()
        .filter(|&z| {
            let m = shifted(a, z);
            qr_min_pivot(&m) > threshold
                && inverse(&m).map_or(true, |inv| !inf_norm(&inv).is_finite())
        })
        .collect())
}

pub fn analyze_spectrum(a: &ComplexMatrix, tol: f64) -> Result<SpectrumReport> {
    Ok(SpectrumReport {
        point: point_spectrum(a, tol)?,
        residual: residual_spectrum(a, tol)?,
        approximate: approximate_spectrum(a, tol)?,
        algebraic: algebraic_spectrum(a, tol)?,
        topological: topological_spectrum(a, tol)?,
        tol,
    })
}

/// `sigma_r(A)` by the rank criterion against `sigma_p(A^T)`.
pub fn dual_residual_check(a: &ComplexMatrix, tol: f64) -> Result<CheckReport> {
    let d = hausdorff(
        &residual_spectrum(a, tol)?,
        &residual_via_transpose(a, tol)?,
    );
    Ok(CheckReport::new(
        "dual-residual",
        vec![CheckEntry::at_most("rank_vs_transpose_point", d, tol)],
    ))
}

/// The set identities `sigma_alg = sigma_a u sigma_r`,
/// `sigma = sigma_alg u sigma_t`, `sigma_ap c sigma` and `sigma_t = {}`.
pub fn decomposition_check(a: &ComplexMatrix, tol: f64) -> Result<CheckReport> {
    let alg = algebraic_spectrum(a, tol)?;
    let sa = a_spectrum(a, tol)?;
    let res = residual_spectrum(a, tol)?;
    let top = topological_spectrum(a, tol)?;
    let ap = approximate_spectrum(a, tol)?;
    let radius = merge_radius(a, tol);

    let union = |x: &[Complex64], y: &[Complex64]| {
        let mut all = x.to_vec();
        all.extend_from_slice(y);
        distinct(&all, radius)
    };
    // the full spectrum: non-invertibility by LU, independent of the QR route
    let spectrum: Vec<Complex64> = candidates(a, tol)?
        .into_iter()
        .filter(|&z| inverse(&shifted(a, z)).map_or(true, |inv| inf_norm(&inv) >= 1.0 / radius))
        .collect();
    let ap_outside = ap
        .iter()
        .map(|&z| min_distance(z, &spectrum))
        .fold(0.0, f64::max);

    Ok(CheckReport::new(
        "decomposition",
        vec![
            CheckEntry::at_most(
                "alg_equals_a_union_r",
                hausdorff(&alg, &union(&sa, &res)),
                tol,
            ),
            CheckEntry::at_most(
                "spectrum_equals_alg_union_t",
                hausdorff(&spectrum, &union(&alg, &top)),
                tol,
            ),
            CheckEntry::at_most("approximate_within_spectrum", ap_outside, tol),
            CheckEntry::holds("topological_empty", top.is_empty()),
        ],
    ))
}

/// Point, residual, approximate and algebraic spectra coincide as sets
/// and the topological spectrum is empty.
pub fn collapse_check(a: &ComplexMatrix, tol: f64) -> Result<CheckReport> {
    let r = analyze_spectrum(a, tol)?;
    let p = r.point_values();
    Ok(CheckReport::new(
        "finite-dimensional-collapse",
        vec![
            CheckEntry::at_most("point_vs_residual", hausdorff(&p, &r.residual), tol),
            CheckEntry::at_most("point_vs_approximate", hausdorff(&p, &r.approximate), tol),
            CheckEntry::at_most("point_vs_algebraic", hausdorff(&p, &r.algebraic), tol),
            CheckEntry::holds("topological_empty", r.topological.is_empty()),
        ],
    ))
}

/// Minimal distance from `lambda` to the spectrum below which the
/// resolvent is not formed.
pub const RESOLVENT_GUARD: f64 = 1e-8;

/// `sigma_p(R(lambda, A)) \ {0} = {1/(lambda - mu) : mu in sigma_p(A)}`,
/// and `ker(eta - R) = ker((lambda - 1/eta) - A)` for every such `eta`.
pub fn resolvent_map_check(a: &ComplexMatrix, lambda: Complex64, tol: f64) -> Result<CheckReport> {
    check_square(a)?;
    let spectrum = eigenvalues(a)?;
    let distance = min_distance(lambda, &spectrum);
    if distance <= RESOLVENT_GUARD {
        return Err(Error::NearSpectrum { distance });
    }
    let r = inverse(&shifted(a, lambda))?;
    let lhs: Vec<Complex64> = point_values(&r, tol)?
        .into_iter()
        .filter(|z| z.norm() > tol)
        .collect();
    let images: Vec<Complex64> = point_values(a, tol)?
        .iter()
        .map(|mu| 1.0 / (lambda - mu))
        .collect();
    let rhs = distinct(&images, merge_radius(&r, tol));

    let mut entries = vec![CheckEntry::at_most(
        "resolvent_point_mapping",
        hausdorff(&lhs, &rhs),
        tol,
    )];
    for (k, &eta) in lhs.iter().enumerate() {
        let ker_r = null_space(&shifted(&r, eta), scaled(tol, &r));
        let ker_a = null_space(&shifted(a, lambda - 1.0 / eta), scaled(tol, a));
        let angle = principal_angle(&ker_r, &ker_a);
        entries.push(CheckEntry::at_most(
            format!("kernel_identity[{k}]"),
            angle,
            tol,
        ));
    }
    Ok(CheckReport::new("resolvent-mapping", entries))
}
