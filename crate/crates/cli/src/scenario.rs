use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sgspec_core::io::{generator_from_value, parse_catalog_uri, parse_real};
use sgspec_core::{ComplexMatrix, Error, GeneratorSpec, QuadratureConfig, SemigroupEvaluator};

/// Failure of a run as a whole, as opposed to a failing check.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "configuration error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e.to_string())
        } else {
            RunError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Config(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    AnalyzeSpectrum,
    VerifyIdentities,
    PeriodicProjections,
    PointMapping,
    ResidualMapping,
    ResolventMapping,
    Eigenspaces,
    Hardy,
}

impl CheckId {
    pub const ALL: [CheckId; 8] = [
        CheckId::AnalyzeSpectrum,
        CheckId::VerifyIdentities,
        CheckId::PeriodicProjections,
        CheckId::PointMapping,
        CheckId::ResidualMapping,
        CheckId::ResolventMapping,
        CheckId::Eigenspaces,
        CheckId::Hardy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::AnalyzeSpectrum => "analyze-spectrum",
            CheckId::VerifyIdentities => "verify-identities",
            CheckId::PeriodicProjections => "periodic-projections",
            CheckId::PointMapping => "point-mapping",
            CheckId::ResidualMapping => "residual-mapping",
            CheckId::ResolventMapping => "resolvent-mapping",
            CheckId::Eigenspaces => "eigenspaces",
            CheckId::Hardy => "hardy",
        }
    }

    /// Comma-separated ids, or `all`. Duplicates are dropped, order kept.
    pub fn parse_list(s: &str) -> Result<Vec<CheckId>, RunError> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<CheckId> = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let id = item.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl FromStr for CheckId {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|c| c.as_str()).collect();
                RunError::Config(format!("unknown check `{s}` (known: {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(RunError::Config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    File(PathBuf),
    Catalog(String),
}

impl InputSource {
    pub fn parse(s: &str) -> Self {
        if s.starts_with("catalog:") {
            InputSource::Catalog(s.to_string())
        } else {
            InputSource::File(PathBuf::from(s))
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub input: InputSource,
    pub quadrature: QuadratureConfig,
    pub checks: Vec<CheckId>,
    pub t_values: Vec<f64>,
    pub tol: f64,
    pub format: Format,
    pub seed: u64,
    /// A known (not necessarily minimal) period for `periodic-projections`.
    pub period_hint: Option<f64>,
}

impl ScenarioConfig {
    pub fn new(input: InputSource, checks: Vec<CheckId>) -> Self {
        Self {
            input,
            quadrature: QuadratureConfig::default(),
            checks,
            t_values: vec![1.0],
            tol: 1e-8,
            format: Format::Json,
            seed: 0,
            period_hint: None,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.checks.is_empty() {
            return Err(RunError::Config("at least one check is required".into()));
        }
        if self.t_values.is_empty() {
            return Err(RunError::Config("at least one time is required".into()));
        }
        if let Some(t) = self
            .t_values
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0))
        {
            return Err(RunError::Config(format!(
                "times must be finite and >= 0, got {t}"
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(RunError::Config(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if let Some(h) = self.period_hint {
            if !(h.is_finite() && h > 0.0) {
                return Err(RunError::Config(format!(
                    "period hint must be > 0, got {h}"
                )));
            }
        }
        self.quadrature.validate()?;
        Ok(())
    }
}

/// Comma-separated reals; `pi` suffixes allowed (`1,2pi`).
pub fn parse_times(s: &str) -> Result<Vec<f64>, RunError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_real(x).map_err(RunError::from))
        .collect()
}

/// The generator `A` and the evaluator producing `T(t)`. They are
/// normally consistent; a generator file may name a different evaluator
/// under the key `evaluator` to build a deliberately mismatched pair.
#[derive(Clone, Debug)]
pub struct LoadedInput {
    pub spec: GeneratorSpec,
    pub generator: ComplexMatrix,
    pub evaluator: SemigroupEvaluator,
    pub mismatched: bool,
}

pub fn load_input(source: &InputSource) -> Result<LoadedInput, RunError> {
    let (spec, override_spec) = match source {
        InputSource::Catalog(uri) => (GeneratorSpec::Catalog(parse_catalog_uri(uri)?), None),
        InputSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
            let mut value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
            let evaluator = value.as_object_mut().and_then(|o| o.remove("evaluator"));
            let spec = generator_from_value(&value)?;
            let override_spec = evaluator.map(|v| generator_from_value(&v)).transpose()?;
            (spec, override_spec)
        }
    };
    let own = spec.build()?;
    let generator = own.generator_of().clone();
    let (evaluator, mismatched) = match override_spec {
        Some(o) => {
            let ev = o.build()?;
            if ev.dim() != own.dim() {
                return Err(RunError::Config(format!(
                    "evaluator dimension {} does not match generator dimension {}",
                    ev.dim(),
                    own.dim()
                )));
            }
            (ev, true)
        }
        None => (own, false),
    };
    Ok(LoadedInput {
        spec,
        generator,
        evaluator,
        mismatched,
    })
}
