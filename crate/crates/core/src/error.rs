use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix exponential overflow: |tA| = {norm:.3e} exceeds bound {bound:.3e}")]
    Overflow { norm: f64, bound: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("eigensolver did not converge on {what}")]
    NoConvergence { what: String },

    #[error("Laplace integral diverges: Re(lambda) = {re_lambda} <= spectral abscissa {abscissa}")]
    Divergent { re_lambda: f64, abscissa: f64 },

    #[error("lambda is within {distance:.3e} of the spectrum")]
    NearSpectrum { distance: f64 },

    #[error("mu is within {distance:.3e} of the lattice 2*pi*i/rho*Z")]
    NearLattice { distance: f64 },

    #[error("t0 = {t0} is not a period: |T(t0) - I| = {residual:.3e}")]
    NotAPeriod { t0: f64, residual: f64 },

    #[error("contour radius {radius} must lie in (0, {limit})")]
    RadiusOutOfRange { radius: f64, limit: f64 },

    #[error("{lambda} is not an eigenvalue (smallest singular value {sigma_min:.3e})")]
    NotAnEigenvalue { lambda: String, sigma_min: f64 },

    #[error("n_max = {n_max} misses lattice points inside the spectral disc")]
    NMaxTooSmall { n_max: usize },

    #[error("{what}: achieved {achieved:.3e}, target {target:.3e}")]
    Tolerance {
        what: String,
        achieved: f64,
        target: f64,
    },

    #[error("weight function has no sample points")]
    EmptyWeights,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Overflow { .. } | Error::Tolerance { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
