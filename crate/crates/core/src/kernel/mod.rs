//! The profile `f`, the kernels `u`, `k`, `k_ε` on the unit square, and
//! Hilbert–Schmidt norm estimates by graded tensor Gauss–Legendre rules.

pub mod quadrature;

use serde::Serialize;

use crate::builder::{preconditioned, profile_grid, u_kernel_indexed};
use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, Real};

pub use quadrature::{gauss_legendre, pairwise_sum, QuadratureGrid, DEFAULT_ORDER};

/// Cells per axis used by the CLI when none is given.
pub const DEFAULT_CELLS: usize = 256;

/// Two-grid error above this fraction of the estimate flags the result.
pub const FLAG_RELATIVE_ERROR: f64 = 0.05;

/// `f(t) = 1/(2t)` on `(0, 1/2]`, `2(1 − t)` on `(1/2, 1]`.
pub fn f_eval<T: Real>(t: T) -> Result<T> {
    let half = T::lit(0.5);
    if !(t > T::zero() && t <= T::one()) {
        return Err(Error::Domain(format!("f is defined on (0, 1], got {t}")));
    }
    Ok(if t <= half { (T::lit(2.0) * t).recip() } else { T::lit(2.0) * (T::one() - t) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    /// `⌊f(s) f(t)⌋`
    U,
    /// `f(s)^{-1/2} ⌊f(s) f(t)⌋ f(t)^{-1/2}`
    K,
    /// `f(s)^{-1/2-ε} ⌊f(s) f(t)⌋ f(t)^{-1/2-ε}`
    KEps(T),
}

impl<T: Real> KernelSpec<T> {
    /// Regularization exponent; zero for `K`.
    fn epsilon(&self) -> Option<T> {
        match *self {
            KernelSpec::U => None,
            KernelSpec::K => Some(T::zero()),
            KernelSpec::KEps(e) => Some(e),
        }
    }

    /// Kernel value from already evaluated `f(s)`, `f(t)`.
    pub fn from_profile(&self, fs: T, ft: T) -> T {
        let product = fs * ft;
        let fl = snapped_floor(product);
        match self.epsilon() {
            None => fl,
            Some(_) if fl.is_zero() => T::zero(),
            Some(e) if e.is_zero() => fl / product.sqrt(),
            Some(e) => fl * product.powf(-(T::lit(0.5) + e)),
        }
    }
}

/// `⌊x⌋`, except that values within a relative `1e-10` of an integer are
/// taken to be that integer. Grid products such as `f(33/68) f(67/68)` equal
/// an integer exactly but land a few ulps below it in floating point.
pub fn snapped_floor<T: Real>(x: T) -> T {
    let nearest = x.round();
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(16.0));
    if (x - nearest).abs() <= tol * nearest.abs().max(T::one()) {
        nearest
    } else {
        x.floor()
    }
}

pub fn kernel_eval<T: Real>(spec: KernelSpec<T>, s: T, t: T) -> Result<T> {
    Ok(spec.from_profile(f_eval(s)?, f_eval(t)?))
}

/// `∫₀¹ f(s)^{1−2ε} ds = 1/(4ε) + 1/(4(1−ε))`, the closed form of the
/// square root of the Hilbert–Schmidt bound on `k_ε`.
pub fn bound_integral<T: Real>(epsilon: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::Domain(format!("bound integral needs 0 < epsilon < 1, got {epsilon}")));
    }
    let four = T::lit(4.0);
    Ok((four * epsilon).recip() + (four * (T::one() - epsilon)).recip())
}

/// A quadrature value with its two-grid error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsEstimate<T> {
    pub value: T,
    pub two_grid_error: T,
    pub flagged: bool,
}

impl<T: Real> HsEstimate<T> {
    fn from_pair(fine: T, coarse: T) -> Self {
        let err = (fine - coarse).abs();
        let flagged = err > T::lit(FLAG_RELATIVE_ERROR) * fine.abs() || !fine.is_finite();
        Self { value: fine, two_grid_error: err, flagged }
    }
}

/// Grading exponent matched to the edge singularity of `k_ε²`.
pub fn default_grading<T: Real>(epsilon: T) -> T {
    epsilon.recip().max(T::lit(2.0))
}

fn check_eps<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon < T::lit(0.5)) {
        return Err(Error::Domain(format!(
            "k_eps is only square-integrable here for 0 < epsilon < 0.5, got {epsilon}"
        )));
    }
    Ok(())
}

fn hs_norm_on<T: Real>(spec: KernelSpec<T>, grid: &QuadratureGrid<T>) -> T {
    let profile: Vec<T> = grid.nodes.iter().map(|&x| f_eval(x).expect("nodes lie in (0, 1)")).collect();
    grid.integrate_square(|i, j| {
        let v = spec.from_profile(profile[i], profile[j]);
        v * v
    })
    .sqrt()
}

/// `‖k_ε‖_{L²}` on `grid`, with the same rule at half the cells as the
/// coarse comparison.
pub fn hs_norm<T: Real>(spec: KernelSpec<T>, grid: &QuadratureGrid<T>) -> Result<HsEstimate<T>> {
    let KernelSpec::KEps(epsilon) = spec else {
        return Err(Error::Domain("Hilbert-Schmidt norm is only finite for k_eps".into()));
    };
    check_eps(epsilon)?;
    let coarse_cells = grid.cells_per_axis / 2;
    if coarse_cells < 2 || !coarse_cells.is_multiple_of(2) {
        return Err(Error::Domain("need cells per axis divisible by 4 for a two-grid estimate".into()));
    }
    let coarse = QuadratureGrid::graded(coarse_cells, grid.grading, grid.order)?;
    let fine = hs_norm_on(spec, grid);
    let coarse = hs_norm_on(spec, &coarse);
    Ok(HsEstimate::from_pair(fine, coarse))
}

/// `‖k_ε‖` with the default graded rule.
pub fn hs_norm_default<T: Real>(epsilon: T, cells: usize) -> Result<HsEstimate<T>> {
    check_eps(epsilon)?;
    let grid = QuadratureGrid::graded(cells, default_grading(epsilon), DEFAULT_ORDER)?;
    hs_norm(KernelSpec::KEps(epsilon), &grid)
}

/// `‖k_{eps1} − k_{eps2}‖_{L²([δ,1]²)}`; `eps2 = None` compares against `k`.
pub fn hs_distance_truncated<T: Real>(
    eps1: T,
    eps2: Option<T>,
    delta: T,
    cells: usize,
) -> Result<HsEstimate<T>> {
    if !(delta > T::zero() && delta < T::lit(0.25)) {
        return Err(Error::Domain(format!("delta must lie in (0, 0.25), got {delta}")));
    }
    for e in std::iter::once(eps1).chain(eps2) {
        if !(e >= T::zero() && e < T::lit(0.5)) {
            return Err(Error::Domain(format!("epsilon must lie in [0, 0.5), got {e}")));
        }
    }
    if cells < 2 || !cells.is_multiple_of(2) {
        return Err(Error::Domain("cells per axis must be even and >= 2".into()));
    }
    let a = KernelSpec::KEps(eps1);
    let b = KernelSpec::KEps(eps2.unwrap_or_else(T::zero));
    let run = |cells: usize| -> Result<T> {
        let grid = QuadratureGrid::uniform(delta, T::one(), cells, DEFAULT_ORDER)?;
        let profile: Vec<T> = grid.nodes.iter().map(|&x| f_eval(x).expect("inside (0, 1]")).collect();
        Ok(grid
            .integrate_square(|i, j| {
                let diff = a.from_profile(profile[i], profile[j]) - b.from_profile(profile[i], profile[j]);
                diff * diff
            })
            .sqrt())
    };
    let fine = run(cells)?;
    let coarse = run(cells / 2)?;
    Ok(HsEstimate::from_pair(fine, coarse))
}

/// Max-abs deviation between `k(i/2r, j/2r)` and `K_n` built from the
/// kernel-indexed `U_n`.
pub fn discretization_check<T: Real>(n: u64) -> Result<T> {
    let r = exact_sqrt(n).filter(|&r| r > 0).ok_or(Error::NotPerfectSquare(n))?;
    let u = u_kernel_indexed::<T>(n)?;
    let d = profile_grid::<T>(r);
    let k = preconditioned(&u, &d)?;
    let two_r = T::from_u64_exact(2 * r);
    let mut worst = T::zero();
    for i in 0..k.dim() {
        let s = T::from_usize(i + 1).unwrap() / two_r;
        for j in 0..k.dim() {
            let t = T::from_usize(j + 1).unwrap() / two_r;
            let v = kernel_eval(KernelSpec::K, s, t)?;
            worst = worst.max((v - k[(i, j)]).abs());
        }
    }
    Ok(worst)
}
