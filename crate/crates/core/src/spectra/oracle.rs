//! Eigenvalues from the characteristic polynomial, computed without any
//! matrix factorization: cofactor expansion of `det(lambda I - A)` followed
//! by Aberth-Ehrlich simultaneous root iteration. Used only to cross-check
//! the Schur-based eigensolver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::check_square;
use crate::ComplexMatrix;

pub const ORACLE_MAX_DIM: usize = 6;
const MAX_ITERATIONS: usize = 500;

/// Polynomial with coefficients in increasing degree.
type Poly = Vec<Complex64>;

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Poly, p: &[Complex64], sign: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex64::new(0.0, 0.0));
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += x * sign;
    }
}

/// Entry `(i, j)` of `lambda I - A` as a degree <= 1 polynomial.
fn entry(a: &ComplexMatrix, i: usize, j: usize) -> Poly {
    if i == j {
        vec![-a[(i, j)], Complex64::new(1.0, 0.0)]
    } else {
        vec![-a[(i, j)]]
    }
}

/// Laplace expansion along the first remaining row.
fn det(a: &ComplexMatrix, rows: &[usize], cols: &[usize]) -> Poly {
    if rows.len() == 1 {
        return entry(a, rows[0], cols[0]);
    }
    let mut acc: Poly = vec![Complex64::new(0.0, 0.0)];
    for (k, &col) in cols.iter().enumerate() {
        let e = entry(a, rows[0], col);
        if e.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let minor_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let minor = det(a, &rows[1..], &minor_cols);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        poly_add_scaled(&mut acc, &poly_mul(&e, &minor), sign);
    }
    acc
}

/// Coefficients of `det(lambda I - A)`, lowest degree first.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(a)?;
    let idx: Vec<usize> = (0..n).collect();
    let mut p = det(a, &idx, &idx);
    p.resize(n + 1, Complex64::new(0.0, 0.0));
    Ok(p)
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

/// Roots of a polynomial by Aberth-Ehrlich iteration.
pub fn polynomial_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = p.len() - 1;
    let lead = p[degree];
    if lead == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParams("leading coefficient is zero".into()));
    }
    let p: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let bound = 1.0 + p[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            Complex64::from_polar(
                0.5 * bound,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / degree as f64,
            )
        })
        .collect();
    let coeff_scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);

    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        for k in 0..degree {
            let (value, deriv) = horner(&p, z[k]);
            let magnitude: f64 = p
                .iter()
                .enumerate()
                .map(|(j, c)| c.norm() * z[k].norm().powi(j as i32))
                .sum();
            // backward-error floor: the value is pure rounding noise
            if value.norm() <= 8.0 * degree as f64 * f64::EPSILON * magnitude.max(coeff_scale) {
                continue;
            }
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 1e-15 * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        what: format!("characteristic polynomial of degree {degree}"),
    })
}

/// Eigenvalues of a matrix of dimension at most six, by the polynomial route.
pub fn brute_force_eigen_oracle(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(a)?;
    if n > ORACLE_MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "brute-force oracle supports dim <= {ORACLE_MAX_DIM}, got {n}"
        )));
    }
    let mut roots = polynomial_roots(&characteristic_polynomial(a)?)?;
    crate::linalg::sort_lex(&mut roots);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn char_poly_of_rotation() {
        let a = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let p = characteristic_polynomial(&a).unwrap();
        assert_eq!(p, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn char_poly_of_jordan_block() {
        let mut a = ComplexMatrix::zeros(3, 3);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 2)] = c(1.0, 0.0);
        let p = characteristic_polynomial(&a).unwrap();
        assert_eq!(p, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn simple_spectra() {
        let d = ComplexMatrix::from_diagonal(&crate::ComplexVector::from_column_slice(&[
            c(3.0, 0.0),
            c(-1.0, 0.0),
        ]));
        let r = brute_force_eigen_oracle(&d).unwrap();
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(3.0, 0.0)).norm() < 1e-14);

        let rot = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let r = brute_force_eigen_oracle(&rot).unwrap();
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_large_matrices() {
        assert!(brute_force_eigen_oracle(&ComplexMatrix::zeros(7, 7)).is_err());
    }
}
