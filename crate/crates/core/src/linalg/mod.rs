//! Dense kernels: LU with partial pivoting, symmetric eigendecomposition,
//! matrix norms, and an exact rational elimination oracle.

mod eigen;
mod lu;
mod norms;
pub mod rational;

pub use eigen::{sym_eig, symmetric_eigenvalues, SpectrumResult, DEFAULT_EIG_TOL, MAX_QL_ITERATIONS};
pub use lu::LuFactorization;
pub use norms::{frobenius_norm, spectral_norm};
pub use rational::{rational_solve_allones, rational_solve_ones, RationalMatrix, RATIONAL_DIM_LIMIT};
