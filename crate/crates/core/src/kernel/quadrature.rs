use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gauss–Legendre order used per cell unless overridden.
pub const DEFAULT_ORDER: usize = 8;

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(order: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); order];
    let mut weights = vec![T::zero(); order];
    let n = T::from_usize(order).unwrap();
    let one = T::one();
    let two = T::lit(2.0);
    let pi = T::lit(std::f64::consts::PI);
    for i in 0..order.div_ceil(2) {
        let mut x = (pi * (T::from_usize(i).unwrap() + T::lit(0.75)) / (n + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            // three-term recurrence for P_order(x) and its derivative
            let (mut p0, mut p1) = (one, x);
            for k in 2..=order {
                let k = T::from_usize(k).unwrap();
                let p2 = ((two * k - one) * x * p1 - (k - one) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - one);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= T::epsilon() {
                break;
            }
        }
        let w = two / ((one - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule along one axis.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T> {
    pub cells_per_axis: usize,
    pub grading: T,
    pub order: usize,
    pub lower: T,
    pub upper: T,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureGrid<T> {
    /// Rule on `(0, 1)`: half the cells cover `(0, 1/2]` with edges
    /// `(c / half)^grading / 2`, clustering toward 0; the rest are uniform on
    /// `[1/2, 1)`.
    pub fn graded(cells_per_axis: usize, grading: T, order: usize) -> Result<Self> {
        if cells_per_axis < 2 || !cells_per_axis.is_multiple_of(2) {
            return Err(Error::Domain(format!("cells per axis must be even and >= 2, got {cells_per_axis}")));
        }
        if !(grading >= T::one()) {
            return Err(Error::Domain("grading exponent must be >= 1".into()));
        }
        let half = cells_per_axis / 2;
        let halfway = T::lit(0.5);
        let h = T::from_usize(half).unwrap();
        let mut edges: Vec<T> =
            (0..=half).map(|c| halfway * (T::from_usize(c).unwrap() / h).powf(grading)).collect();
        edges.extend((1..=half).map(|c| halfway + halfway * T::from_usize(c).unwrap() / h));
        Self::from_edges(&edges, grading, order)
    }

    pub fn uniform(lower: T, upper: T, cells_per_axis: usize, order: usize) -> Result<Self> {
        if cells_per_axis == 0 || !(upper > lower) {
            return Err(Error::Domain("uniform grid needs cells >= 1 and lower < upper".into()));
        }
        let c = T::from_usize(cells_per_axis).unwrap();
        let edges: Vec<T> = (0..=cells_per_axis)
            .map(|k| lower + (upper - lower) * T::from_usize(k).unwrap() / c)
            .collect();
        Self::from_edges(&edges, T::one(), order)
    }

    fn from_edges(edges: &[T], grading: T, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("quadrature order must be >= 1".into()));
        }
        let (gx, gw) = gauss_legendre::<T>(order);
        let half = T::lit(0.5);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let mid = half * (a + b);
            let rad = half * (b - a);
            for (&x, &w) in gx.iter().zip(&gw) {
                nodes.push(mid + rad * x);
                weights.push(rad * w);
            }
        }
        Ok(Self {
            cells_per_axis: edges.len() - 1,
            grading,
            order,
            lower: edges[0],
            upper: edges[edges.len() - 1],
            nodes,
            weights,
        })
    }

    pub fn total_weight(&self) -> T {
        pairwise_sum(&self.weights)
    }

    /// `∫∫ g(s, t)` over the square spanned by this rule, summed row by row
    /// in node order.
    pub fn integrate_square(&self, mut g: impl FnMut(usize, usize) -> T) -> T {
        let n = self.nodes.len();
        let mut row = vec![T::zero(); n];
        let mut rows = vec![T::zero(); n];
        for i in 0..n {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.weights[j] * g(i, j);
            }
            rows[i] = self.weights[i] * pairwise_sum(&row);
        }
        pairwise_sum(&rows)
    }
}

/// Pairwise (cascade) summation with a fixed split order.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for order in 1..=10usize {
            let (x, w) = gauss_legendre::<f64>(order);
            for deg in 0..2 * order {
                let q: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "order {order} degree {deg}");
            }
        }
    }

    #[test]
    fn graded_grid_invariants() {
        for cells in [2usize, 16, 64] {
            for grading in [1.0, 4.0, 20.0] {
                let g = QuadratureGrid::<f64>::graded(cells, grading, DEFAULT_ORDER).unwrap();
                assert!((g.total_weight() - 1.0).abs() < 1e-12);
                assert!(g.weights.iter().all(|&w| w > 0.0));
                assert!(g.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
                assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn constant_kernel_integrates_to_one() {
        let g = QuadratureGrid::<f64>::graded(32, 6.0, DEFAULT_ORDER).unwrap();
        assert!((g.integrate_square(|_, _| 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_power_resolved_by_grading() {
        // ∫₀¹ t^{-0.9} dt = 10; the mass below the first node shrinks like cells^-2
        let mut prev = f64::INFINITY;
        for cells in [64, 128, 256] {
            let g = QuadratureGrid::<f64>::graded(cells, 20.0, DEFAULT_ORDER).unwrap();
            let q: f64 = g.nodes.iter().zip(&g.weights).map(|(&x, &w)| w * x.powf(-0.9)).sum();
            let err = (q - 10.0).abs();
            assert!(err < prev / 3.0, "cells {cells}: {q}");
            prev = err;
        }
        assert!(prev < 5e-3, "{prev}");
    }

    #[test]
    fn bad_configurations_rejected() {
        assert!(QuadratureGrid::<f64>::graded(3, 2.0, 8).is_err());
        assert!(QuadratureGrid::<f64>::graded(4, 0.5, 8).is_err());
        assert!(QuadratureGrid::<f64>::uniform(1.0, 0.5, 4, 8).is_err());
        assert!(QuadratureGrid::<f64>::uniform(0.0, 1.0, 4, 0).is_err());
    }
}
