//! Spectral analysis of strongly continuous matrix semigroups.
//!
//! Every quantity is computed from evaluations of `t -> T(t)x`: orbit
//! integrals, Laplace-transform resolvents, averaging projections of
//! periodic semigroups and their Laurent data. The spectral inclusion and
//! mapping relations between a generator and its semigroup are exposed as
//! executable checks, each compared against an independent eigensolver.
//!
//! Infinite-dimensional examples appear only through explicit truncation;
//! see [`hardy`] for the rotation semigroup on the disc.

pub mod catalog;
pub mod error;
pub mod expm;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod mapping;
pub mod periodic;
pub mod quadrature;
pub mod report;
pub mod semigroup;
pub mod spectra;

pub use num_complex::Complex64;

pub type ComplexMatrix = nalgebra::DMatrix<Complex64>;
pub type ComplexVector = nalgebra::DVector<Complex64>;

pub use catalog::{catalog_build, CatalogEntry, GeneratorSpec};
pub use error::{Error, Result};
pub use expm::matrix_exp;
pub use quadrature::{OrbitScheme, QuadratureConfig};
pub use report::{CheckEntry, CheckReport, Verdict};
pub use semigroup::{SemigroupEvaluator, Strategy};
