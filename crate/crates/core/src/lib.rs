//! Mertens matrices and their spectra.
//!
//! The crate builds the integer matrix `U_n` whose all-ones quadratic form
//! against its inverse recovers the Mertens function `M(n)`, the Mertens
//! matrix `T U_n^{-1} T`, and the diagonally preconditioned `K_n`, then
//! measures their spectra over perfect squares `n = k^2`. An integral-kernel
//! module probes the continuous operator that `K_n` discretizes.
//!
//! Dense numerics are generic over [`Real`] (`f32` / `f64`); the exact
//! oracle runs on arbitrary-precision rationals. Concrete aliases for the
//! common instantiations live at the crate root.

pub mod builder;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod sieve;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use scalar::Real;

/// Double-precision dense matrix; the carrier for every matrix family.
pub type SymmetricMatrix = DenseMatrix<f64>;
pub type Matrix64 = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;

pub type LuFactorization64 = linalg::LuFactorization<f64>;
pub type SpectrumResult = linalg::SpectrumResult<f64>;
pub type WeightVectors = builder::WeightVectors<f64>;

/// Exact rational scalar used by the elimination oracle.
pub type Rational = num_rational::BigRational;
pub use linalg::rational::RationalMatrix;
