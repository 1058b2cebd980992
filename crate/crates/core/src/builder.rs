//! Constructors for the matrix families `U`, `T`, `D`, `K`, `K⁻¹` and the
//! Mertens matrix `T U⁻¹ T`, plus the weight vectors `d`, `w`, `u`.
//!
//! Matrices indexed by the divisor-value set `S` use `S` in increasing
//! order. The kernel-indexed `U` samples the profile `f` at `i / (2r)`,
//! `i = 1..2r-1`; both orderings put the largest weights first, so the two
//! constructions are compared position by position.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::LuFactorization;
use crate::matrix::DenseMatrix;
use crate::scalar::{exact_sqrt, Real};
use crate::sieve::DivisorValueSet;

/// Default cap on the dimension of any dense construction.
pub const DEFAULT_DIM_CAP: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    U,
    Uk,
    T,
    D,
    K,
    Kinv,
    M,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::U => "U",
            MatrixKind::Uk => "Uk",
            MatrixKind::T => "T",
            MatrixKind::D => "D",
            MatrixKind::K => "K",
            MatrixKind::Kinv => "Kinv",
            MatrixKind::M => "M",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "U" => MatrixKind::U,
            "Uk" => MatrixKind::Uk,
            "T" => MatrixKind::T,
            "D" => MatrixKind::D,
            "K" => MatrixKind::K,
            "Kinv" => MatrixKind::Kinv,
            "M" => MatrixKind::M,
            other => return Err(Error::Parse(format!("unknown matrix kind {other:?}"))),
        })
    }
}

/// `⌊n / (a·b)⌋` without overflow.
pub fn floor_quotient(n: u64, a: u64, b: u64) -> u64 {
    (n as u128 / (a as u128 * b as u128)) as u64
}

/// Integer entries of the `S`-indexed `U`: `⌊n / (s_i s_j)⌋`.
pub fn u_entries(set: &DivisorValueSet) -> DenseMatrix<u64> {
    let s = set.values();
    DenseMatrix::from_fn(s.len(), |i, j| floor_quotient(set.n(), s[i], s[j]))
}

pub fn u_s_indexed<T: Real>(set: &DivisorValueSet) -> DenseMatrix<T> {
    u_entries(set).map(T::from_u64_exact)
}

/// `f(i / (2r))` as an exact fraction `(numerator, denominator)`.
///
/// `f(t) = 1/(2t)` on `(0, 1/2]` and `2(1 − t)` on `(1/2, 1]`, so the grid
/// values are `r / i` for `i ≤ r` and `(2r − i) / r` beyond.
pub fn profile_on_grid(r: u64, i: u64) -> (u64, u64) {
    debug_assert!(i >= 1 && i < 2 * r);
    if i <= r {
        (r, i)
    } else {
        (2 * r - i, r)
    }
}

/// The `2r − 1` grid values of `f` as floats.
pub fn profile_grid<T: Real>(r: u64) -> Vec<T> {
    (1..2 * r)
        .map(|i| {
            let (num, den) = profile_on_grid(r, i);
            T::from_u64_exact(num) / T::from_u64_exact(den)
        })
        .collect()
}

/// Integer entries of the kernel-indexed `U`: `⌊f(i/2r) f(j/2r)⌋`, floored exactly.
pub fn u_kernel_entries(n: u64) -> Result<DenseMatrix<u64>> {
    let r = exact_sqrt(n).ok_or(Error::NotPerfectSquare(n))?;
    if r == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let grid: Vec<(u64, u64)> = (1..2 * r).map(|i| profile_on_grid(r, i)).collect();
    Ok(DenseMatrix::from_fn(grid.len(), |i, j| {
        let (a, b) = grid[i];
        let (c, d) = grid[j];
        ((a as u128 * c as u128) / (b as u128 * d as u128)) as u64
    }))
}

pub fn u_kernel_indexed<T: Real>(n: u64) -> Result<DenseMatrix<T>> {
    Ok(u_kernel_entries(n)?.map(T::from_u64_exact))
}

/// `T`: ones on and above the antidiagonal, zeros below.
pub fn antidiagonal_ones<T: Real>(dim: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(dim, |i, j| if i + j < dim { T::one() } else { T::zero() })
}

/// `T · Y`, using that row `i` of `T` sums the first `dim − i` rows of `Y`.
pub fn antidiagonal_ones_times<T: Real>(y: &DenseMatrix<T>) -> DenseMatrix<T> {
    let m = y.dim();
    let mut prefix = vec![T::zero(); m];
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for k in 0..m {
        for (p, &v) in prefix.iter_mut().zip(y.row(k)) {
            *p += v;
        }
        rows.push(prefix.clone());
    }
    // row i of the product is the prefix over rows 0..m-i
    DenseMatrix::from_fn(m, |i, j| rows[m - 1 - i][j])
}

/// Preconditioning vectors over `S`: `d_k = √n / k`, `w = d^{-1/2}`, `u = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVectors<T> {
    pub n: u64,
    pub root: usize,
    pub d: Vec<T>,
    pub w: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> WeightVectors<T> {
    pub fn new(set: &DivisorValueSet) -> Self {
        let sqrt_n = T::from_u64_exact(set.n()).sqrt();
        let d: Vec<T> = set.values().iter().map(|&s| sqrt_n / T::from_u64_exact(s)).collect();
        let w = d.iter().map(|&x| x.sqrt().recip()).collect();
        let u = vec![T::one(); d.len()];
        Self { n: set.n(), root: set.root() as usize, d, w, u }
    }

    pub fn norm_sq(&self) -> T {
        self.w.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// `‖w⁻‖²` over the small part of `S`.
    pub fn minus_norm_sq(&self) -> T {
        self.w[..self.root].iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// `‖w⁺‖²` over the large part of `S`.
    pub fn plus_norm_sq(&self) -> T {
        self.w[self.w.len() - self.root..].iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// `⌊√n⌋(⌊√n⌋ + 1) / (2√n)`.
    pub fn minus_norm_sq_closed_form(&self) -> T {
        let r = self.root as u64;
        T::from_u64_exact(r * (r + 1)) / (T::lit(2.0) * T::from_u64_exact(self.n).sqrt())
    }

    /// `(1/√n)(Σ_{j≤⌊√n⌋} j + Σ_{j≤⌊√n⌋} n/j)`, an upper bound for `‖w‖²`.
    pub fn norm_sq_upper_bound(&self) -> T {
        let n = T::from_u64_exact(self.n);
        let harmonic = (1..=self.root as u64).fold(T::zero(), |acc, j| acc + n / T::from_u64_exact(j));
        (T::from_u64_exact((self.root * (self.root + 1) / 2) as u64) + harmonic) / n.sqrt()
    }

    pub fn diagonal(&self) -> DenseMatrix<T> {
        DenseMatrix::diagonal(&self.d)
    }
}

/// `D^{-1/2} U D^{-1/2}`, entry `U_ij / √(d_i d_j)`.
pub fn preconditioned<T: Real>(u: &DenseMatrix<T>, d: &[T]) -> Result<DenseMatrix<T>> {
    check_len(u, d)?;
    let mut k = DenseMatrix::from_fn(u.dim(), |i, j| u[(i, j)] / (d[i] * d[j]).sqrt());
    k.symmetrize();
    Ok(k)
}

/// `D^{1/2} U⁻¹ D^{1/2}` from an LU factorization of `U`.
pub fn preconditioned_inverse<T: Real>(lu: &LuFactorization<T>, d: &[T]) -> Result<DenseMatrix<T>> {
    if lu.dim() != d.len() {
        return Err(Error::DimensionMismatch { expected: lu.dim(), found: d.len() });
    }
    let inv = lu.inverse()?;
    let mut k = DenseMatrix::from_fn(inv.dim(), |i, j| inv[(i, j)] * (d[i] * d[j]).sqrt());
    k.symmetrize();
    Ok(k)
}

/// The Mertens matrix `T U⁻¹ T` from an LU factorization of `U`.
pub fn mertens_matrix<T: Real>(lu: &LuFactorization<T>) -> Result<DenseMatrix<T>> {
    let t = antidiagonal_ones(lu.dim());
    let y = lu.solve_matrix(&t)?;
    let mut m = antidiagonal_ones_times(&y);
    m.symmetrize();
    Ok(m)
}

fn check_len<T>(u: &DenseMatrix<T>, d: &[T]) -> Result<()>
where
    T: Copy + num_traits::Zero,
{
    if u.dim() != d.len() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: d.len() });
    }
    Ok(())
}

/// Every matrix of the family for one `n`, sharing a single factorization of `U`.
#[derive(Debug, Clone)]
pub struct MertensFamily<T> {
    set: DivisorValueSet,
    u: DenseMatrix<T>,
    lu: LuFactorization<T>,
    weights: WeightVectors<T>,
}

impl<T: Real> MertensFamily<T> {
    pub fn new(n: u64, dim_cap: usize) -> Result<Self> {
        let set = DivisorValueSet::new(n)?;
        if set.len() > dim_cap {
            return Err(Error::DimensionCap { dim: set.len(), cap: dim_cap });
        }
        let u = u_s_indexed(&set);
        let lu = LuFactorization::new(&u)?;
        let weights = WeightVectors::new(&set);
        Ok(Self { set, u, lu, weights })
    }

    pub fn n(&self) -> u64 {
        self.set.n()
    }

    pub fn dim(&self) -> usize {
        self.set.len()
    }

    pub fn set(&self) -> &DivisorValueSet {
        &self.set
    }

    pub fn u(&self) -> &DenseMatrix<T> {
        &self.u
    }

    pub fn lu(&self) -> &LuFactorization<T> {
        &self.lu
    }

    pub fn weights(&self) -> &WeightVectors<T> {
        &self.weights
    }

    pub fn t(&self) -> DenseMatrix<T> {
        antidiagonal_ones(self.dim())
    }

    pub fn k(&self) -> Result<DenseMatrix<T>> {
        preconditioned(&self.u, &self.weights.d)
    }

    pub fn k_inverse(&self) -> Result<DenseMatrix<T>> {
        preconditioned_inverse(&self.lu, &self.weights.d)
    }

    pub fn mertens_matrix(&self) -> Result<DenseMatrix<T>> {
        mertens_matrix(&self.lu)
    }

    pub fn build(&self, kind: MatrixKind) -> Result<DenseMatrix<T>> {
        match kind {
            MatrixKind::U => Ok(self.u.clone()),
            MatrixKind::Uk => u_kernel_indexed(self.n()),
            MatrixKind::T => Ok(self.t()),
            MatrixKind::D => Ok(self.weights.diagonal()),
            MatrixKind::K => self.k(),
            MatrixKind::Kinv => self.k_inverse(),
            MatrixKind::M => self.mertens_matrix(),
        }
    }
}
