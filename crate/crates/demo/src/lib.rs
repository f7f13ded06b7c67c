//! Operations behind the static demo page. Each takes plain strings and
//! numbers and returns JSON, so the page needs no bindings beyond
//! wasm-bindgen's string passing. The same functions run natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sgspec_core::catalog::random_vector;
use sgspec_core::hardy::{hardy_projection, DiscFunction};
use sgspec_core::io::{generator_from_json, parse_catalog_uri};
use sgspec_core::linalg::{directed_distance, hausdorff, vec_inf_norm};
use sgspec_core::spectra::point_values;
use sgspec_core::{Complex64, GeneratorSpec, QuadratureConfig, SemigroupEvaluator};

/// Upper limits keeping a browser tab responsive.
const MAX_DIM: usize = 32;
const MAX_STEPS: usize = 4000;
const MAX_DEGREE: usize = 24;

fn load(source: &str) -> Result<SemigroupEvaluator, String> {
    let source = source.trim();
    let spec = if source.starts_with("catalog:") {
        GeneratorSpec::Catalog(parse_catalog_uri(source).map_err(|e| e.to_string())?)
    } else {
        generator_from_json(source).map_err(|e| e.to_string())?
    };
    let s = spec.build().map_err(|e| e.to_string())?;
    if s.dim() > MAX_DIM {
        return Err(format!(
            "dimension {} exceeds the demo limit {MAX_DIM}",
            s.dim()
        ));
    }
    Ok(s)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SpectrumMapping {
    t: f64,
    generator: Vec<Complex64>,
    exponentiated: Vec<Complex64>,
    semigroup: Vec<Complex64>,
    hausdorff: f64,
    inclusion_gap: f64,
}

/// `sigma_p(A)`, its image `e^{t sigma_p(A)}` and `sigma_p(T(t))`.
pub fn spectrum_mapping(source: &str, t: f64, tol: f64) -> Result<String, String> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(format!("t must be finite and >= 0, got {t}"));
    }
    let s = load(source)?;
    let sigma = point_values(s.generator_of(), tol).map_err(|e| e.to_string())?;
    let image: Vec<Complex64> = sigma.iter().map(|z| (z * t).exp()).collect();
    let op = s.operator(t).map_err(|e| e.to_string())?;
    let semigroup: Vec<Complex64> = point_values(&op, tol)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|z| z.norm() > tol)
        .collect();
    to_json(&SpectrumMapping {
        t,
        hausdorff: hausdorff(&semigroup, &image),
        inclusion_gap: directed_distance(&image, &semigroup),
        generator: sigma,
        exponentiated: image,
        semigroup,
    })
}

#[derive(Serialize)]
struct Orbit {
    times: Vec<f64>,
    /// `states[k][j]` is coordinate `j` of `T(times[k]) x`.
    states: Vec<Vec<Complex64>>,
    norms: Vec<f64>,
}

/// Samples `t -> T(t)x` on `[0, t_max]` for a seeded start vector.
pub fn orbit(source: &str, t_max: f64, steps: usize, seed: u64) -> Result<String, String> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(format!("t_max must be > 0, got {t_max}"));
    }
    if steps == 0 || steps > MAX_STEPS {
        return Err(format!("steps must be in 1..={MAX_STEPS}"));
    }
    let s = load(source)?;
    let x = random_vector(s.dim(), seed);
    let mut out = Orbit {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        norms: Vec::with_capacity(steps + 1),
    };
    for k in 0..=steps {
        let t = t_max * k as f64 / steps as f64;
        let y = s.evaluate_orbit(t, &x).map_err(|e| e.to_string())?;
        out.times.push(t);
        out.norms.push(vec_inf_norm(&y));
        out.states.push(y.iter().copied().collect());
    }
    to_json(&out)
}

#[derive(Serialize)]
struct HardyProjection {
    degree: usize,
    n: usize,
    input: Vec<Complex64>,
    projected: Vec<Complex64>,
    expected: Vec<Complex64>,
    error: f64,
    /// `|sum_n P_n g - g|`, the finite Fourier reconstruction.
    reconstruction_error: f64,
}

/// `P_n g` for the disc rotation, with `g` given as a JSON list of
/// `[re, im]` Taylor coefficients (empty: seeded random coefficients).
pub fn hardy(coeffs_json: &str, degree: usize, n: usize, seed: u64) -> Result<String, String> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(format!("degree must be in 1..={MAX_DEGREE}"));
    }
    let coeffs: Vec<Complex64> = if coeffs_json.trim().is_empty() {
        random_vector(degree + 1, seed).iter().copied().collect()
    } else {
        let mut c: Vec<Complex64> = serde_json::from_str(coeffs_json).map_err(|e| e.to_string())?;
        c.resize(degree + 1, Complex64::new(0.0, 0.0));
        c
    };
    let g = DiscFunction::new(coeffs).map_err(|e| e.to_string())?;
    let cfg = QuadratureConfig::default();
    let (projected, expected) = hardy_projection(degree, n, &g, &cfg).map_err(|e| e.to_string())?;
    let mut sum = g.to_vector() * Complex64::new(0.0, 0.0);
    for k in 0..=degree {
        sum += hardy_projection(degree, k, &g, &cfg)
            .map_err(|e| e.to_string())?
            .0;
    }
    to_json(&HardyProjection {
        degree,
        n,
        error: vec_inf_norm(&(&projected - &expected)),
        reconstruction_error: vec_inf_norm(&(sum - g.to_vector())),
        input: g.coeffs.clone(),
        projected: projected.iter().copied().collect(),
        expected: expected.iter().copied().collect(),
    })
}

#[wasm_bindgen(js_name = spectrumMapping)]
pub fn spectrum_mapping_js(source: &str, t: f64, tol: f64) -> Result<String, JsValue> {
    spectrum_mapping(source, t, tol).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = orbit)]
pub fn orbit_js(source: &str, t_max: f64, steps: u32, seed: u32) -> Result<String, JsValue> {
    orbit(source, t_max, steps as usize, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = hardyProjection)]
pub fn hardy_js(coeffs_json: &str, degree: u32, n: u32, seed: u32) -> Result<String, JsValue> {
    hardy(coeffs_json, degree as usize, n as usize, seed as u64).map_err(|e| JsValue::from_str(&e))
}
