use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Relative residual tolerance: `‖Av − λv‖₂ ≤ tol · ‖A‖_F`.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;

/// QL sweeps allowed per eigenvalue before giving up.
pub const MAX_QL_ITERATIONS: usize = 30;

/// Leading part of a symmetric eigendecomposition.
///
/// Eigenvalues are ordered by decreasing magnitude with their signs kept;
/// equal magnitudes put the positive value first. Each eigenvector has its
/// largest-magnitude entry (lowest index on ties) made positive.
#[derive(Debug, Clone)]
pub struct SpectrumResult<T> {
    pub dim: usize,
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<Vec<T>>,
    pub residuals: Vec<T>,
}

impl<T: Real> SpectrumResult<T> {
    pub fn residual_max(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, &r| m.max(r))
    }

    /// `V Λ Vᵀ` over the retained pairs.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..self.dim {
                let a = *lambda * v[i];
                for j in 0..self.dim {
                    out[(i, j)] += a * v[j];
                }
            }
        }
        out
    }

    /// Max-abs deviation of the eigenvector Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for (a, va) in self.eigenvectors.iter().enumerate() {
            for (b, vb) in self.eigenvectors.iter().enumerate() {
                let dot = va.iter().zip(vb).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full symmetric eigendecomposition truncated to the `top_k` largest |λ|.
///
/// Householder tridiagonalization followed by implicit-shift QL.
pub fn sym_eig<T: Real>(a: &DenseMatrix<T>, top_k: usize) -> Result<SpectrumResult<T>> {
    let n = a.dim();
    if top_k > n {
        return Err(Error::Domain(format!("top_k = {top_k} exceeds dimension {n}")));
    }
    a.ensure_symmetric()?;
    let (mut diag, mut off, q) = tridiagonalize(a, true);
    let mut z = q.expect("requested");
    implicit_ql(&mut diag, &mut off, Some(&mut z))?;

    let order = magnitude_order(&diag);
    let mut eigenvalues = Vec::with_capacity(top_k);
    let mut eigenvectors = Vec::with_capacity(top_k);
    let mut residuals = Vec::with_capacity(top_k);
    for &idx in order.iter().take(top_k) {
        let lambda = diag[idx];
        let mut v: Vec<T> = (0..n).map(|i| z[(i, idx)]).collect();
        normalize_sign(&mut v);
        let av = a.matvec(&v)?;
        let res = av
            .iter()
            .zip(&v)
            .fold(T::zero(), |acc, (&x, &y)| {
                let r = x - lambda * y;
                acc + r * r
            })
            .sqrt();
        eigenvalues.push(lambda);
        eigenvectors.push(v);
        residuals.push(res);
    }
    Ok(SpectrumResult { dim: n, eigenvalues, eigenvectors, residuals })
}

/// All eigenvalues, ordered as in [`SpectrumResult`], without eigenvectors.
pub fn symmetric_eigenvalues<T: Real>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    a.ensure_symmetric()?;
    let (mut diag, mut off, _) = tridiagonalize(a, false);
    implicit_ql(&mut diag, &mut off, None)?;
    Ok(magnitude_order(&diag).into_iter().map(|i| diag[i]).collect())
}

fn magnitude_order<T: Real>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        b.abs()
            .partial_cmp(&a.abs())
            .unwrap_or(Ordering::Equal)
            .then(b.partial_cmp(&a).unwrap_or(Ordering::Equal))
            .then(i.cmp(&j))
    });
    order
}

fn normalize_sign<T: Real>(v: &mut [T]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| x.is_sign_negative()) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Reduces `a` to tridiagonal form `Qᵀ a Q`.
///
/// Returns the diagonal, the coupling `off[i]` between rows `i` and `i + 1`
/// (with `off[n - 1] = 0`), and `Q` when asked for.
fn tridiagonalize<T: Real>(a: &DenseMatrix<T>, want_q: bool) -> (Vec<T>, Vec<T>, Option<DenseMatrix<T>>) {
    let n = a.dim();
    let mut w = a.clone();
    let mut q = want_q.then(|| DenseMatrix::identity(n));
    let two = T::lit(2.0);
    let half = T::lit(0.5);

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<T> = (k + 1..n).map(|i| w[(i, k)]).collect();
        let norm = v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if norm.is_zero() {
            continue;
        }
        let alpha = if v[0] > T::zero() { -norm } else { norm };
        v[0] -= alpha;
        let vtv = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        if vtv.is_zero() {
            continue;
        }
        let beta = two / vtv;

        // p = beta * B v over the trailing block
        let mut p = vec![T::zero(); m];
        for (r, pr) in p.iter_mut().enumerate() {
            let row = &w.row(k + 1 + r)[k + 1..];
            *pr = beta * row.iter().zip(&v).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
        }
        let kc = half * beta * v.iter().zip(&p).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
        let qv: Vec<T> = p.iter().zip(&v).map(|(&pi, &vi)| pi - kc * vi).collect();
        for r in 0..m {
            for c in 0..m {
                w[(k + 1 + r, k + 1 + c)] -= v[r] * qv[c] + qv[r] * v[c];
            }
        }
        w[(k + 1, k)] = alpha;
        w[(k, k + 1)] = alpha;
        for i in k + 2..n {
            w[(i, k)] = T::zero();
            w[(k, i)] = T::zero();
        }

        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let row = &mut q.row_mut(i)[k + 1..];
                let dot = row.iter().zip(&v).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
                let s = beta * dot;
                for (x, &vi) in row.iter_mut().zip(&v) {
                    *x -= s * vi;
                }
            }
        }
    }

    let diag = (0..n).map(|i| w[(i, i)]).collect();
    let mut off: Vec<T> = (0..n).map(|i| if i + 1 < n { w[(i + 1, i)] } else { T::zero() }).collect();
    if let Some(last) = off.last_mut() {
        *last = T::zero();
    }
    (diag, off, q)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. On success `diag`
/// holds the eigenvalues and the columns of `z` the rotated basis.
fn implicit_ql<T: Real>(diag: &mut [T], off: &mut [T], mut z: Option<&mut DenseMatrix<T>>) -> Result<()> {
    let n = diag.len();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iterations == MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { index: l, iterations });
            }
            iterations += 1;

            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(T::one());
            g = diag[m] - diag[l] + off[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r.is_zero() {
                    diag[i + 1] -= p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_ordering_by_magnitude() {
        let a = DenseMatrix::diagonal(&[2.0, -3.0]);
        let s = sym_eig(&a, 2).unwrap();
        assert_eq!(s.eigenvalues, vec![-3.0, 2.0]);
        assert_eq!(s.eigenvectors[0], vec![0.0, 1.0]);
    }

    #[test]
    fn identity_top_two() {
        let s = sym_eig(&DenseMatrix::<f64>::identity(5), 2).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
        assert!(s.residuals.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn equal_magnitudes_put_positive_first() {
        let a = DenseMatrix::from_rows(&[vec![0.0f64, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = sym_eig(&a, 2).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_and_oversized_requests() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(sym_eig(&a, 1), Err(Error::NotSymmetric { row: 0, col: 1 })));
        assert!(matches!(sym_eig(&DenseMatrix::<f64>::identity(2), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn nan_input_hits_iteration_cap() {
        let a = DenseMatrix::from_rows(&[vec![f64::NAN, 1.0], vec![1.0, 0.0]]).unwrap();
        // NaN != NaN, so the symmetry scan passes only off the diagonal
        assert!(matches!(symmetric_eigenvalues(&a), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn tridiagonal_input_is_untouched_by_reduction() {
        let a = DenseMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let vals = symmetric_eigenvalues(&a).unwrap();
        let r2 = 2f64.sqrt();
        let expected = [2.0 + r2, 2.0, 2.0 - r2];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn single_precision_matches_double() {
        let a = DenseMatrix::from_fn(6, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let d = symmetric_eigenvalues(&a).unwrap();
        let f = symmetric_eigenvalues(&a.map(|v| v as f32)).unwrap();
        assert!((d[0] - f[0] as f64).abs() < 1e-5);
    }
}
