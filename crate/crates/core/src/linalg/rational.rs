//! Exact elimination over the rationals: the bit-exact oracle for
//! `uᵀ U⁻¹ u` on small matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`rational_solve_allones`].
pub const RATIONAL_DIM_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    pub fn from_integers(dim: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        Self::from_fn(dim, |i, j| BigRational::from_integer(BigInt::from(f(i, j))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }
}

/// `uᵀ A⁻¹ u` for the all-ones `u`, exactly.
pub fn rational_solve_allones(a: &RationalMatrix) -> Result<BigRational> {
    Ok(rational_solve_ones(a)?.into_iter().fold(BigRational::zero(), |s, v| s + v))
}

/// The exact solution of `A x = u` for the all-ones `u`.
///
/// Denominators are cleared first, then the integer system is reduced by
/// fraction-free (Bareiss) elimination, so every intermediate stays integral.
pub fn rational_solve_ones(a: &RationalMatrix) -> Result<Vec<BigRational>> {
    let n = a.dim;
    if n > RATIONAL_DIM_LIMIT {
        return Err(Error::DimensionCap { dim: n, cap: RATIONAL_DIM_LIMIT });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.entries.iter().fold(BigInt::one(), |l, e| l.lcm(e.denom()));
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..n)
                .map(|j| {
                    let e = a.get(i, j);
                    e.numer() * (&scale / e.denom())
                })
                .collect();
            row.push(BigInt::one());
            row
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&i| !rows[i][k].is_zero()).ok_or(Error::Singular { column: k })?;
        rows.swap(k, pivot_row);
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot = &head[k];
        for row in tail.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..=n {
                let v = &row[j] * &pivot[k] - &lead * &pivot[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }

    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(rows[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(rows[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(rows[i][i].clone());
    }
    // A = U * scale, so U⁻¹u = scale * A⁻¹u
    let scale = BigRational::from_integer(scale);
    Ok(x.into_iter().map(|v| v * &scale).collect())
}

/// Exact integer value of a rational, if it is one and fits in `i64`.
pub fn as_integer(q: &BigRational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    let v = q.to_integer();
    if v.abs() > BigInt::from(i64::MAX) {
        return None;
    }
    i64::try_from(v).ok()
}
