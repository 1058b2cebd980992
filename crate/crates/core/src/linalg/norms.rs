use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

use super::eigen::symmetric_eigenvalues;

/// Largest |λ| of a symmetric matrix, i.e. its operator 2-norm.
pub fn spectral_norm<T: Real>(a: &DenseMatrix<T>) -> Result<T> {
    Ok(symmetric_eigenvalues(a)?.first().map_or(T::zero(), |l| l.abs()))
}

pub fn frobenius_norm<T: Real>(a: &DenseMatrix<T>) -> T {
    a.as_slice().iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}
