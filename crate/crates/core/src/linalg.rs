//! Dense complex linear algebra helpers shared by the analysis modules.
//!
//! Norms follow one convention throughout the crate: vectors use the
//! max-modulus norm and matrices the induced operator norm (max row sum).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{ComplexMatrix, ComplexVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

pub fn vec_inf_norm(x: &ComplexVector) -> f64 {
    x.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Induced infinity norm (max absolute row sum).
pub fn inf_norm(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Induced one norm (max absolute column sum).
pub fn one_norm(m: &ComplexMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `tol * max(1, |A|)`: the scale used for all relative thresholds.
pub fn scaled(tol: f64, m: &ComplexMatrix) -> f64 {
    tol * inf_norm(m).max(1.0)
}

pub fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for (j, col) in m.column_iter().enumerate() {
        if let Some(i) = col
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(m.nrows())
}

pub fn shifted(m: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    let n = m.nrows();
    identity(n) * lambda - m
}

pub fn transpose(m: &ComplexMatrix) -> ComplexMatrix {
    m.transpose()
}

pub fn solve(m: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::InvalidParams("singular system".into()))
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(m, &identity(m.nrows()))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn sigma_min(m: &ComplexMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn rank(m: &ComplexMatrix, threshold: f64) -> usize {
    singular_values(m)
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

/// Orthonormal basis of `ker m`: right singular vectors whose singular
/// value is at most `threshold`. Works for tall (stacked) matrices.
pub fn null_space(m: &ComplexMatrix, threshold: f64) -> ComplexMatrix {
    let cols = m.ncols();
    let padded;
    let m = if m.nrows() < cols {
        padded = m.clone().resize_vertically(cols, Complex64::new(0.0, 0.0));
        &padded
    } else {
        m
    };
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let picked: Vec<ComplexVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    columns_to_matrix(cols, &picked)
}

/// Orthonormal basis of `ran m`.
pub fn column_space(m: &ComplexMatrix, threshold: f64) -> ComplexMatrix {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let picked: Vec<ComplexVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > threshold)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    columns_to_matrix(m.nrows(), &picked)
}

pub fn columns_to_matrix(rows: usize, cols: &[ComplexVector]) -> ComplexMatrix {
    if cols.is_empty() {
        return DMatrix::zeros(rows, 0);
    }
    DMatrix::from_columns(cols)
}

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases. Unequal dimensions give `pi/2`.
pub fn principal_angle(q1: &ComplexMatrix, q2: &ComplexMatrix) -> f64 {
    if q1.ncols() != q2.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if q1.ncols() == 0 {
        return 0.0;
    }
    // sin of the largest angle = |(I - Q1 Q1^H) Q2|_2; measured both ways
    // because rounding can make the two projections differ slightly.
    let s12 = spectral_norm(&(q2 - q1 * (q1.adjoint() * q2)));
    let s21 = spectral_norm(&(q1 - q2 * (q2.adjoint() * q1)));
    s12.max(s21).min(1.0).asin()
}

pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Eigenvalues from the complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(m)?;
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)] == Complex64::new(0.0, 0.0)));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)] == Complex64::new(0.0, 0.0)));
    if upper || lower {
        return Ok((0..n).map(|i| m[(i, i)]).collect());
    }
    let schur_diag = |x: &ComplexMatrix| {
        x.clone()
            .try_schur(f64::EPSILON, 100 * n * n)
            .map(|s| s.unpack().1.diagonal().iter().copied().collect::<Vec<_>>())
    };
    if let Some(values) = schur_diag(m) {
        return Ok(values);
    }
    // QR iterations can stall on exactly structured input; a fixed unitary
    // similarity perturbs the shift sequence without changing the spectrum.
    let q = fixed_unitary(n);
    schur_diag(&(q.adjoint() * m * &q)).ok_or_else(|| Error::NoConvergence {
        what: format!("{n}x{n} matrix with |A| = {:.3e}", inf_norm(m)),
    })
}

fn fixed_unitary(n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |i, j| {
        let k = (i * n + j) as f64;
        Complex64::new((1.3 * k + 0.7).sin(), (2.1 * k + 0.2).cos())
    });
    g.qr().q()
}

pub fn spectral_abscissa(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

pub fn min_distance(z: Complex64, set: &[Complex64]) -> f64 {
    set.iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed_distance(a, b).max(directed_distance(b, a)),
    }
}

/// `sup_{z in from} dist(z, to)`; zero when `from` is empty.
pub fn directed_distance(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|&z| min_distance(z, to))
        .fold(0.0, f64::max)
}

pub fn sort_lex(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Groups values whose single-linkage distance is at most `radius`.
/// Returns (mean, count) per cluster, sorted lexicographically.
pub fn cluster(values: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

/// Distinct values of a set after clustering at `radius`.
pub fn distinct(values: &[Complex64], radius: f64) -> Vec<Complex64> {
    cluster(values, radius)
        .into_iter()
        .map(|(z, _)| z)
        .collect()
}

pub fn basis_vector(n: usize, k: usize) -> ComplexVector {
    let mut v = DVector::zeros(n);
    v[k] = Complex64::new(1.0, 0.0);
    v
}
