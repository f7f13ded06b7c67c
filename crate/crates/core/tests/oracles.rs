//! Main computations against independent reference constructions.

use std::f64::consts::PI;

use sgspec_core::catalog::{random_matrix, random_stable_matrix};
use sgspec_core::linalg::{c, eigenvalues, hausdorff, identity, inf_norm, inverse, sort_lex};
use sgspec_core::periodic::{laurent_coefficients, laurent_partial_sum, periodic_resolvent};
use sgspec_core::spectra::oracle::{
    brute_force_eigen_oracle, characteristic_polynomial, ORACLE_MAX_DIM,
};
use sgspec_core::{matrix_exp, ComplexMatrix, QuadratureConfig, SemigroupEvaluator};

/// Plain Taylor sum, adequate for `|tA| <= 2`.
fn taylor_exp(a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = a.nrows();
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..60 {
        term = &term * a * c(t / k as f64, 0.0);
        sum += &term;
    }
    sum
}

#[test]
fn expm_matches_taylor_on_small_norms() {
    for seed in 0..20 {
        let a = random_matrix(5, seed);
        let t = 2.0 / inf_norm(&a);
        let d = inf_norm(&(matrix_exp(&a, t).unwrap() - taylor_exp(&a, t)));
        assert!(d <= 1e-13, "seed {seed}: {d}");
    }
}

#[test]
fn expm_matches_similarity_on_large_norms() {
    // A = V D V^{-1} with a well-conditioned V and a spread-out diagonal
    for seed in 0..10 {
        let v = identity(4) + random_matrix(4, 100 + seed) * c(0.2, 0.0);
        let vinv = inverse(&v).unwrap();
        let d = [c(-8.0, 3.0), c(-1.0, -12.0), c(0.5, 0.0), c(-3.0, 25.0)];
        let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
        let a = &v * &diag * &vinv;
        let t = 0.9;
        let exp_d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            d.iter().map(|z| (z * t).exp()),
        ));
        let want = &v * exp_d * &vinv;
        let err = inf_norm(&(matrix_exp(&a, t).unwrap() - &want)) / inf_norm(&want);
        assert!(err <= 1e-11, "seed {seed}: {err}");
    }
}

#[test]
fn eigensolver_matches_characteristic_polynomial_oracle() {
    for dim in 1..=ORACLE_MAX_DIM {
        for seed in 0..15u64 {
            let a = random_matrix(dim, 31 * dim as u64 + seed);
            let mut main = eigenvalues(&a).unwrap();
            sort_lex(&mut main);
            let oracle = brute_force_eigen_oracle(&a).unwrap();
            assert!(hausdorff(&main, &oracle) <= 1e-7, "dim {dim}, seed {seed}");
        }
    }
}

#[test]
fn oracle_handles_repeated_roots() {
    let s = SemigroupEvaluator::nilpotent_shift(4).unwrap();
    let roots = brute_force_eigen_oracle(s.generator_of()).unwrap();
    assert!(roots.iter().all(|z| z.norm() <= 1e-3));
    let p = characteristic_polynomial(s.generator_of()).unwrap();
    assert_eq!(p.len(), 5);
    assert!(p[..4].iter().all(|z| z.norm() == 0.0));
}

#[test]
fn laurent_data_for_two_point_lattice() {
    // diag(0, 2 pi i) with period 1: the residue at 0 is e_0 e_0^T, and the
    // constant term is the resolvent with the pole removed, diag(0, -1/(2 pi i)).
    let s = SemigroupEvaluator::diagonal(vec![c(0.0, 0.0), c(0.0, 2.0 * PI)]).unwrap();
    let cfg = QuadratureConfig::default();
    let coeffs = laurent_coefficients(&s, 1.0, 0, 2, &cfg).unwrap();
    let e00 =
        ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(inf_norm(&(&coeffs[0] - &e00)) <= 1e-9);
    let a0 = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 1.0 / (2.0 * PI)),
        ],
    );
    assert!(inf_norm(&(&coeffs[1] - &a0)) <= 1e-9);
}

#[test]
fn laurent_partial_sums_converge_geometrically() {
    let s = SemigroupEvaluator::rotation(1.0).unwrap();
    let cfg = QuadratureConfig {
        contour_radius: 0.5,
        ..QuadratureConfig::default()
    };
    let offset = c(0.1, 0.05);
    let mu = c(0.0, 1.0) + offset;
    let target = inverse(&(identity(2) * mu - s.generator_of())).unwrap();
    let coeffs = laurent_coefficients(&s, 2.0 * PI, 1, 8, &cfg).unwrap();
    let errs: Vec<f64> = (1..coeffs.len())
        .map(|k| inf_norm(&(laurent_partial_sum(&coeffs[..=k], offset) - &target)))
        .collect();
    // the next pole is at distance 2 from the centre, so the ratio is |offset| / 2
    for w in errs.windows(2).take(4) {
        assert!(w[1] <= w[0] * 0.2, "{errs:?}");
    }
    assert!(errs.last().copied().unwrap() <= 1e-9);
}

#[test]
fn periodic_resolvent_equals_direct_inverse() {
    let s = SemigroupEvaluator::rotation(1.0).unwrap();
    let cfg = QuadratureConfig::default();
    for mu in [c(0.3, 0.2), c(-0.4, 2.5), c(1.0, -0.5)] {
        let r = periodic_resolvent(&s, 2.0 * PI, mu, &cfg).unwrap();
        let want = inverse(&(identity(2) * mu - s.generator_of())).unwrap();
        assert!(inf_norm(&(r - want)) <= 1e-8, "mu = {mu}");
    }
}

#[test]
fn stable_matrices_have_prescribed_abscissa_bound() {
    for seed in 0..10 {
        let a = random_stable_matrix(6, seed, -0.5);
        let abscissa = eigenvalues(&a)
            .unwrap()
            .iter()
            .map(|z| z.re)
            .fold(f64::MIN, f64::max);
        assert!(abscissa <= -0.5 + 1e-10, "seed {seed}: {abscissa}");
    }
}
