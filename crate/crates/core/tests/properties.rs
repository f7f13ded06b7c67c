//! Invariants checked over random inputs.

use std::f64::consts::PI;

use proptest::prelude::*;
use sgspec_core::catalog::{
    catalog_build, random_matrix, random_stable_matrix, random_vector, standard_entries,
};
use sgspec_core::linalg::{c, hausdorff, identity, inf_norm, vec_inf_norm};
use sgspec_core::mapping::{eigenspace_union_check, inclusion_checks, point_mapping_check};
use sgspec_core::periodic::{detect_period, laurent_coefficients, spectral_projection};
use sgspec_core::quadrature::{contour_integral_circle, laplace_resolvent, orbit_integral, rule};
use sgspec_core::spectra::{point_spectrum, point_values, resolvent_map_check};
use sgspec_core::{Complex64, ComplexMatrix, OrbitScheme, QuadratureConfig, SemigroupEvaluator};

fn evaluators() -> Vec<SemigroupEvaluator> {
    standard_entries()
        .iter()
        .map(|e| catalog_build(e).unwrap().1)
        .collect()
}

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn semigroup_law(s in 0.0..4.0 * PI, t in 0.0..4.0 * PI, seed in 0u64..1000) {
        for ev in evaluators() {
            let x = random_vector(ev.dim(), seed);
            let lhs = ev.evaluate_orbit(s + t, &x).unwrap();
            let rhs = ev.evaluate_orbit(s, &ev.evaluate_orbit(t, &x).unwrap()).unwrap();
            let scale = ev.operator(s + t).unwrap();
            // Growth of T makes the bound relative to |T(s+t)| for the unstable entries.
            let bound = 1e-10 * (1.0 + vec_inf_norm(&x)) * inf_norm(&scale).max(1.0);
            prop_assert!(vec_inf_norm(&(lhs - rhs)) <= bound);
        }
    }

    #[test]
    fn rescale_generator(re in -2.0..2.0f64, im in -2.0..2.0f64, speed in 0.1..3.0f64, seed in 0u64..1000) {
        let a = random_matrix(4, seed);
        let s = SemigroupEvaluator::from_generator(a.clone()).unwrap();
        let lambda = c(re, im);
        let r = s.rescale(lambda, speed).unwrap();
        let want = &a * c(speed, 0.0) - identity(4) * lambda;
        prop_assert!((r.generator_of() - &want).iter().all(|z| z.norm() <= 1e-10));
        let t = 0.7;
        let direct = s.operator(speed * t).unwrap() * (-lambda * t).exp();
        prop_assert!(inf_norm(&(r.operator(t).unwrap() - direct)) <= 1e-10 * inf_norm(&r.operator(t).unwrap()).max(1.0));
    }

    #[test]
    fn transpose_symmetry(seed in 0u64..1000, dim in 1usize..6) {
        let a = random_matrix(dim, seed);
        let p = point_values(&a, 1e-8).unwrap();
        let q = point_values(&a.transpose(), 1e-8).unwrap();
        prop_assert!(hausdorff(&p, &q) <= 1e-8 * inf_norm(&a).max(1.0));
    }

    #[test]
    fn eigenpair_residual(seed in 0u64..1000, dim in 1usize..6) {
        let a = random_matrix(dim, seed);
        let tol = 1e-8;
        for p in point_spectrum(&a, tol).unwrap() {
            for v in &p.eigenvectors {
                let r = &a * v - v * p.lambda;
                prop_assert!(vec_inf_norm(&r) <= 10.0 * tol * inf_norm(&a));
            }
        }
    }

    #[test]
    fn resolvent_identity(seed in 0u64..200, l in 0.5..3.0f64, m in 0.5..3.0f64, im in -1.0..1.0f64) {
        let a = random_stable_matrix(3, seed, -0.5);
        let s = SemigroupEvaluator::from_generator(a).unwrap();
        let cfg = QuadratureConfig::default();
        let (lambda, mu) = (c(l, im), c(m, -im));
        let rl = laplace_resolvent(&s, lambda, &cfg).unwrap();
        let rm = laplace_resolvent(&s, mu, &cfg).unwrap();
        let lhs = &rl - &rm;
        let rhs = (&rl * &rm) * (mu - lambda);
        prop_assert!(inf_norm(&(lhs - rhs)) <= 10.0 * cfg.tol);
    }

    #[test]
    fn resolvent_mapping_random(seed in 0u64..1000, re in 5.5..8.0f64, im in -4.0..4.0f64) {
        // entries have modulus < sqrt 2, so |sigma| < 3 sqrt 2 < 4.5 for dim 3
        let a = random_matrix(3, seed);
        prop_assert!(resolvent_map_check(&a, c(re, im), 1e-8).unwrap().passed());
    }

    #[test]
    fn inclusion_follows_equality(t in 0.05..4.0f64, idx in 0usize..6) {
        let ev = evaluators().swap_remove(idx);
        let a = ev.generator_of().clone();
        let eq = point_mapping_check(&a, &ev, &[t], 1e-8).unwrap();
        if eq.passed() {
            prop_assert!(inclusion_checks(&a, &ev, &[t], 1e-8).unwrap().passed());
        }
        prop_assert!(eq.rows.iter().all(|r| r.removed_zeros == 0));
    }

    #[test]
    fn union_dimension_for_distinct_lattices(t in 0.3..3.0f64, k in 1usize..4) {
        // Eigenvalues 0, i and one placed on the lattice of 0 at spacing 2 pi / t.
        let third = c(0.0, 2.0 * PI * k as f64 / t);
        let ev = SemigroupEvaluator::diagonal(vec![c(0.0, 0.0), c(0.0, 1.0), third]).unwrap();
        let a = ev.generator_of().clone();
        let r = eigenspace_union_check(&a, &ev, c(0.0, 0.0), t, None, 1e-8).unwrap();
        prop_assert!(r.passed());
        let aliased_i = ((1.0 * t / (2.0 * PI)).fract()).abs() < 1e-9;
        prop_assert_eq!(r.dim_semigroup, if aliased_i { 3 } else { 2 });
    }

    #[test]
    fn period_of_rescaled_rotation(speed in 0.25..4.0f64) {
        let s = SemigroupEvaluator::rotation(1.0).unwrap().rescale(c(0.0, 0.0), speed).unwrap();
        let rho = 2.0 * PI / speed;
        let found = detect_period(&s, 3.0 * rho, 6, 1e-9).unwrap();
        prop_assert!((found - rho).abs() <= 1e-9 * rho.max(1.0));
    }
}

#[test]
fn finite_difference_generator() {
    for ev in evaluators() {
        let x = random_vector(ev.dim(), 11);
        let ax = ev.generator_of() * &x;
        let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&h| vec_inf_norm(&((ev.evaluate_orbit(h, &x).unwrap() - &x) / c(h, 0.0) - &ax)))
            .collect();
        let scale = inf_norm(ev.generator_of()).max(1.0).powi(2) * vec_inf_norm(&x);
        for (e, h) in errs.iter().zip([1e-3, 1e-4, 1e-5]) {
            assert!(*e <= scale * h, "h = {h}: {e}");
        }
        // first-order decay: each tenfold reduction of h gains roughly a decade
        if errs[0] > 1e-12 {
            assert!(errs[1] <= errs[0] / 5.0, "{errs:?}");
        }
    }
}

#[test]
fn simpson_convergence_order() {
    let a = random_stable_matrix(4, 5, -0.3);
    let s = SemigroupEvaluator::from_generator(a.clone()).unwrap();
    let x = random_vector(4, 6);
    let t = 2.0;
    let lambda = c(0.2, 0.1);
    // closed form: (lambda - A)^{-1} (I - e^{-lambda t} T(t)) x
    let shift = identity(4) * lambda - &a;
    let rhs = (identity(4) - s.operator(t).unwrap() * (-lambda * t).exp()) * &x;
    let exact = shift.lu().solve(&rhs).unwrap();
    let err = |panels: usize| {
        let cfg = QuadratureConfig {
            orbit_nodes: panels,
            orbit_scheme: OrbitScheme::Simpson,
            ..QuadratureConfig::default()
        };
        vec_inf_norm(&(orbit_integral(&s, lambda, t, &x, &cfg).unwrap() - &exact))
    };
    for panels in [4, 8, 16] {
        let ratio = err(panels) / err(2 * panels);
        assert!(ratio >= 3.5, "panels {panels}: ratio {ratio}");
    }
}

#[test]
fn rule_weights_integrate_polynomials() {
    for scheme in [
        OrbitScheme::Trapezoid,
        OrbitScheme::Simpson,
        OrbitScheme::Gauss,
    ] {
        let r = rule(3.0, 10, scheme);
        let total: f64 = r.iter().map(|(_, w)| w).sum();
        assert!((total - 3.0).abs() < 1e-13);
        let quad: f64 = r.iter().map(|(s, w)| w * s * s).sum();
        let tolerance = if scheme == OrbitScheme::Trapezoid {
            0.05
        } else {
            1e-12
        };
        assert!((quad - 9.0).abs() < tolerance, "{scheme:?}: {quad}");
    }
}

#[test]
fn contour_self_consistency() {
    let a = random_matrix(3, 21);
    let center = c(5.0, 0.0);
    // Resolvent is holomorphic inside |z - 5| < 1 (spectrum within |z| <= 3),
    // so the mean value over the circle equals the value at the centre.
    let integral = |n: usize| {
        contour_integral_circle(
            |z: Complex64| {
                let r: ComplexMatrix = (identity(3) * z - &a).lu().try_inverse().unwrap();
                Ok(r / (z - center))
            },
            center,
            1.0,
            n,
        )
        .unwrap()
    };
    let coarse: ComplexMatrix = integral(64);
    let fine: ComplexMatrix = integral(128);
    assert!(inf_norm(&(&coarse - &fine)) <= 1e-12);
    let direct = (identity(3) * center - &a).lu().try_inverse().unwrap();
    assert!(inf_norm(&(coarse - direct)) <= 1e-12);
}

#[test]
fn projection_routes_agree_on_periodic_catalog() {
    let cases: Vec<(SemigroupEvaluator, f64)> = vec![
        (SemigroupEvaluator::rotation(1.0).unwrap(), 2.0 * PI),
        (
            SemigroupEvaluator::diagonal(vec![c(0.0, 0.0), c(0.0, 2.0 * PI)]).unwrap(),
            1.0,
        ),
        (
            sgspec_core::hardy::disc_rotation_semigroup(4).unwrap(),
            2.0 * PI,
        ),
    ];
    let cfg = QuadratureConfig {
        contour_nodes: 64,
        contour_radius: 0.5,
        ..QuadratureConfig::default()
    };
    for (s, rho) in cases {
        for n in -2i64..=4 {
            let p = spectral_projection(&s, rho, n, &cfg).unwrap();
            let a_minus1 = &laurent_coefficients(&s, rho, n, 0, &cfg).unwrap()[0];
            let d = sgspec_core::periodic::projection_distance(&p, a_minus1);
            assert!(d <= 1e-9, "rho {rho}, n {n}: {d}");
        }
    }
}
