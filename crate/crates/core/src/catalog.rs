//! Named generator families with matched closed-form evaluators.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::check_square;
use crate::semigroup::SemigroupEvaluator;
use crate::{ComplexMatrix, ComplexVector};

pub const CATALOG_IDS: [&str; 5] = [
    "diagonal",
    "rotation2d",
    "nilpotent_shift",
    "disc_rotation",
    "random_stable",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "catalog", content = "params", rename_all = "snake_case")]
pub enum CatalogEntry {
    Diagonal {
        entries: Vec<Complex64>,
    },
    Rotation2d {
        omega: f64,
    },
    NilpotentShift {
        dim: usize,
    },
    /// Taylor-truncated rotation semigroup on the disc: coefficient `n`
    /// evolves as `e^{int}`, `0 <= n <= degree`.
    DiscRotation {
        #[serde(alias = "N")]
        degree: usize,
    },
    RandomStable {
        dim: usize,
        seed: u64,
        #[serde(alias = "a")]
        abscissa: f64,
    },
}

impl CatalogEntry {
    /// Builds an entry from an identifier and a JSON parameter object.
    pub fn parse(id: &str, params: &serde_json::Value) -> Result<Self> {
        if !CATALOG_IDS.contains(&id) {
            return Err(Error::UnknownCatalog(id.to_string()));
        }
        let tagged = serde_json::json!({ "catalog": id, "params": params });
        let entry: Self = serde_json::from_value(tagged)
            .map_err(|e| Error::InvalidParams(format!("{id}: {e}")))?;
        entry.validate()?;
        Ok(entry)
    }

    pub fn id(&self) -> &'static str {
        match self {
            CatalogEntry::Diagonal { .. } => "diagonal",
            CatalogEntry::Rotation2d { .. } => "rotation2d",
            CatalogEntry::NilpotentShift { .. } => "nilpotent_shift",
            CatalogEntry::DiscRotation { .. } => "disc_rotation",
            CatalogEntry::RandomStable { .. } => "random_stable",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match self {
            CatalogEntry::Diagonal { entries } => {
                if entries.is_empty() {
                    return bad("diagonal: entries must be non-empty".into());
                }
                if entries
                    .iter()
                    .any(|z| !z.re.is_finite() || !z.im.is_finite())
                {
                    return bad("diagonal: entries must be finite".into());
                }
            }
            CatalogEntry::Rotation2d { omega } => {
                if !(omega.is_finite() && *omega > 0.0) {
                    return bad(format!("rotation2d: omega must be > 0, got {omega}"));
                }
            }
            CatalogEntry::NilpotentShift { dim } => {
                if *dim < 2 {
                    return bad(format!("nilpotent_shift: dim must be >= 2, got {dim}"));
                }
            }
            CatalogEntry::DiscRotation { degree } => {
                if *degree < 1 {
                    return bad(format!("disc_rotation: degree must be >= 1, got {degree}"));
                }
            }
            CatalogEntry::RandomStable { dim, abscissa, .. } => {
                if *dim < 1 {
                    return bad("random_stable: dim must be >= 1".into());
                }
                if !(abscissa.is_finite() && *abscissa < 0.0) {
                    return bad(format!(
                        "random_stable: abscissa must be < 0, got {abscissa}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Whether the disc rotation truncation applies (reported alongside results).
    pub fn truncation(&self) -> Option<usize> {
        match self {
            CatalogEntry::DiscRotation { degree } => Some(*degree),
            _ => None,
        }
    }

    /// A known period of the semigroup, when the entry has one by construction.
    pub fn known_period(&self) -> Option<f64> {
        match self {
            CatalogEntry::Rotation2d { omega } => Some(2.0 * PI / omega),
            CatalogEntry::DiscRotation { .. } => Some(2.0 * PI),
            _ => None,
        }
    }
}

/// Where a generator came from.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Dense(ComplexMatrix),
    Catalog(CatalogEntry),
}

impl GeneratorSpec {
    pub fn dense(m: ComplexMatrix) -> Result<Self> {
        check_square(&m)?;
        Ok(GeneratorSpec::Dense(m))
    }

    pub fn build(&self) -> Result<SemigroupEvaluator> {
        match self {
            GeneratorSpec::Dense(m) => SemigroupEvaluator::from_generator(m.clone()),
            GeneratorSpec::Catalog(entry) => Ok(catalog_build(entry)?.1),
        }
    }
}

/// Builds the generator/evaluator pair for a catalog entry.
pub fn catalog_build(entry: &CatalogEntry) -> Result<(GeneratorSpec, SemigroupEvaluator)> {
    entry.validate()?;
    let evaluator = match entry {
        CatalogEntry::Diagonal { entries } => SemigroupEvaluator::diagonal(entries.clone())?,
        CatalogEntry::Rotation2d { omega } => SemigroupEvaluator::rotation(*omega)?,
        CatalogEntry::NilpotentShift { dim } => SemigroupEvaluator::nilpotent_shift(*dim)?,
        CatalogEntry::DiscRotation { degree } => SemigroupEvaluator::diagonal(
            (0..=*degree)
                .map(|n| Complex64::new(0.0, n as f64))
                .collect(),
        )?,
        CatalogEntry::RandomStable {
            dim,
            seed,
            abscissa,
        } => SemigroupEvaluator::from_generator(random_stable_matrix(*dim, *seed, *abscissa))?,
    };
    Ok((GeneratorSpec::Catalog(entry.clone()), evaluator))
}

/// Convenience: parse and build in one step.
pub fn catalog_from_id(
    id: &str,
    params: &serde_json::Value,
) -> Result<(GeneratorSpec, SemigroupEvaluator)> {
    catalog_build(&CatalogEntry::parse(id, params)?)
}

/// The fixed set of entries exercised by the catalog-wide checks.
pub fn standard_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry::Diagonal {
            entries: vec![
                Complex64::new(0.0, 2.0 * PI),
                Complex64::new(0.0, -2.0 * PI),
            ],
        },
        CatalogEntry::Diagonal {
            entries: vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0 * PI)],
        },
        CatalogEntry::Rotation2d { omega: 1.0 },
        CatalogEntry::NilpotentShift { dim: 3 },
        CatalogEntry::DiscRotation { degree: 4 },
        CatalogEntry::RandomStable {
            dim: 6,
            seed: 42,
            abscissa: -0.5,
        },
    ]
}

fn uniform_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Dense matrix with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(dim, dim, |_, _| uniform_complex(&mut rng))
}

pub fn random_vector(dim: usize, seed: u64) -> ComplexVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexVector::from_fn(dim, |_, _| uniform_complex(&mut rng))
}

/// `Q U Q^H` with `Q` unitary and `U` upper triangular whose diagonal has
/// real parts in `[a - 2, a - 0.05]`, so every eigenvalue has real part
/// strictly below `a`. The strictly upper part makes the matrix non-normal.
pub fn random_stable_matrix(dim: usize, seed: u64, abscissa: f64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut upper = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let re = abscissa - 0.05 - 1.95 * rng.random::<f64>();
        let im = rng.random_range(-2.0..2.0);
        upper[(i, i)] = Complex64::new(re, im);
        for j in (i + 1)..dim {
            upper[(i, j)] = uniform_complex(&mut rng) * 0.5;
        }
    }
    let z = DMatrix::from_fn(dim, dim, |_, _| uniform_complex(&mut rng));
    let q = z.qr().q();
    &q * upper * q.adjoint()
}
