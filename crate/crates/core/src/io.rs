//! JSON file formats. Complex numbers are always `[re, im]` pairs and
//! matrices are row-major nested arrays of pairs.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{CatalogEntry, GeneratorSpec};
use crate::error::{Error, Result};
use crate::linalg::check_square;
use crate::ComplexMatrix;

/// `serde(with = ...)` adapter for complex matrices.
pub mod matrix_rows {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            actual: bad.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, cols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DenseFile {
    dim: usize,
    #[serde(with = "matrix_rows")]
    matrix: ComplexMatrix,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyGenerator {
    Catalog {
        catalog: String,
        #[serde(default)]
        params: serde_json::Value,
    },
    Dense(DenseFile),
}

impl Serialize for GeneratorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GeneratorSpec::Dense(m) => DenseFile {
                dim: m.nrows(),
                matrix: m.clone(),
            }
            .serialize(s),
            GeneratorSpec::Catalog(entry) => entry.serialize(s),
        }
    }
}

/// Parses either `{"dim", "matrix"}` or `{"catalog", "params"}`.
pub fn generator_from_value(value: &serde_json::Value) -> Result<GeneratorSpec> {
    match AnyGenerator::deserialize(value)
        .map_err(|e| Error::InvalidParams(format!("generator JSON: {e}")))?
    {
        AnyGenerator::Catalog { catalog, params } => {
            let params = if params.is_null() {
                serde_json::json!({})
            } else {
                params
            };
            Ok(GeneratorSpec::Catalog(CatalogEntry::parse(
                &catalog, &params,
            )?))
        }
        AnyGenerator::Dense(file) => {
            let n = check_square(&file.matrix)?;
            if n != file.dim {
                return Err(Error::DimensionMismatch {
                    expected: file.dim,
                    actual: n,
                });
            }
            Ok(GeneratorSpec::Dense(file.matrix))
        }
    }
}

pub fn generator_from_json(text: &str) -> Result<GeneratorSpec> {
    generator_from_value(&serde_json::from_str(text)?)
}

pub fn generator_to_json(spec: &GeneratorSpec) -> Result<String> {
    Ok(serde_json::to_string(spec)?)
}

pub fn read_generator(path: &Path) -> Result<GeneratorSpec> {
    generator_from_json(&std::fs::read_to_string(path)?)
}

/// Parses `catalog:<id>?key=value&...`. List values (the `entries` of a
/// diagonal) are comma-separated `re:im` pairs. Reals accept a trailing
/// `pi`, e.g. `2pi`, `-0.5pi`, `pi`.
pub fn parse_catalog_uri(uri: &str) -> Result<CatalogEntry> {
    let rest = uri
        .strip_prefix("catalog:")
        .ok_or_else(|| Error::InvalidParams(format!("not a catalog spec: {uri}")))?;
    let (id, query) = rest.split_once('?').unwrap_or((rest, ""));
    let mut params = serde_json::Map::new();
    for pair in query.split('&').filter(|p| !p.is_empty()) {
        let (key, raw) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{pair}`")))?;
        let value = if key == "entries" {
            let mut list = Vec::new();
            for item in raw.split(',') {
                let (re, im) = item.split_once(':').unwrap_or((item, "0"));
                list.push(serde_json::json!([parse_real(re)?, parse_real(im)?]));
            }
            serde_json::Value::Array(list)
        } else if let Ok(k) = raw.parse::<u64>() {
            serde_json::json!(k)
        } else {
            serde_json::json!(parse_real(raw)?)
        };
        params.insert(key.to_string(), value);
    }
    CatalogEntry::parse(id, &serde_json::Value::Object(params))
}

pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidParams(format!("not a number: `{s}`"));
    if let Some(coeff) = s.strip_suffix("pi") {
        let k = match coeff {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(k * PI);
    }
    s.parse::<f64>().map_err(|_| bad())
}
