use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// `PA = LU` with partial pivoting. `L` is unit lower triangular and shares
/// storage with `U`.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    lu: DenseMatrix<T>,
    /// `perm[i]` is the original row now sitting at row `i`.
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> LuFactorization<T> {
    /// Pivot ties go to the smallest row index among maximal-magnitude candidates.
    pub fn new(a: &DenseMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let floor = T::pivot_floor();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best >= floor) {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.dim(), |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Less => T::zero(),
        })
    }

    pub fn upper(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.dim(), |i, j| if i <= j { self.lu[(i, j)] } else { T::zero() })
    }

    /// `PA` rebuilt from the original matrix, for comparison with `LU`.
    pub fn permute_rows(&self, a: &DenseMatrix<T>) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.dim(), |i, j| a[(self.perm[i], j)])
    }

    pub fn determinant(&self) -> T {
        let mut det = if self.swaps.is_multiple_of(2) { T::one() } else { -T::one() };
        for i in 0..self.dim() {
            det *= self.lu[(i, i)];
        }
        det
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
        let mut out = DenseMatrix::zeros(n);
        let mut col = vec![T::zero(); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = b[(i, j)];
            }
            let x = self.solve(&col)?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DenseMatrix<T>> {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u4() -> DenseMatrix<f64> {
        DenseMatrix::from_rows(&[vec![4.0, 2.0, 1.0], vec![2.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]])
            .unwrap()
    }

    fn u9() -> DenseMatrix<f64> {
        let s = [1u64, 2, 3, 4, 9];
        DenseMatrix::from_fn(5, |i, j| (9 / (s[i] * s[j])) as f64)
    }

    #[test]
    fn identity_factorization() {
        let lu = LuFactorization::new(&DenseMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(lu.lower(), DenseMatrix::identity(4));
        assert_eq!(lu.upper(), DenseMatrix::identity(4));
        assert_eq!(lu.permutation(), &[0, 1, 2, 3]);
    }

    #[test]
    fn reconstruction_u4() {
        let a = u4();
        let lu = LuFactorization::new(&a).unwrap();
        let prod = lu.lower().matmul(&lu.upper()).unwrap();
        assert!(lu.permute_rows(&a).max_abs_diff(&prod).unwrap() <= 1e-14);
    }

    #[test]
    fn forced_permutation() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let lu = LuFactorization::new(&a).unwrap();
        assert_eq!(lu.permutation(), &[1, 0]);
        assert_eq!(lu.solve(&[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn pivot_tie_prefers_lowest_row() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![-2.0, 1.0, 0.0], vec![2.0, 0.0, 1.0]])
            .unwrap();
        let lu = LuFactorization::new(&a).unwrap();
        assert_eq!(lu.permutation()[0], 1);
    }

    #[test]
    fn singular_detected() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(LuFactorization::new(&a), Err(Error::Singular { column: 1 })));
        let z = DenseMatrix::<f64>::zeros(3);
        assert!(matches!(LuFactorization::new(&z), Err(Error::Singular { column: 0 })));
    }

    #[test]
    fn solve_u9_all_ones() {
        let lu = LuFactorization::new(&u9()).unwrap();
        let x = lu.solve(&[1.0; 5]).unwrap();
        let expected = [1.0, -1.0, -1.0, 0.0, -1.0];
        for (a, b) in x.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((x.iter().sum::<f64>() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn solve_u4_all_ones() {
        let x = LuFactorization::new(&u4()).unwrap().solve(&[1.0; 3]).unwrap();
        assert!((x.iter().sum::<f64>() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_solve_passthrough() {
        let lu = LuFactorization::new(&DenseMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(lu.solve(&[0.5, -7.0, 3.25]).unwrap(), vec![0.5, -7.0, 3.25]);
    }

    #[test]
    fn determinants_of_small_u() {
        assert!((LuFactorization::new(&u4()).unwrap().determinant() + 1.0).abs() < 1e-12);
        assert!((LuFactorization::new(&u9()).unwrap().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let a = u4().map(|v| v as f32);
        let x = LuFactorization::new(&a).unwrap().solve(&[1.0f32; 3]).unwrap();
        assert!((x.iter().sum::<f32>() + 1.0).abs() < 1e-5);
    }
}
