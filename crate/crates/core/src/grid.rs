//! Tensor-product sampling grids and composite Simpson quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::surface::Domain;

/// A uniform `n1 x n2` grid over a domain, endpoints included. Nodes are
/// ordered with `u2` varying fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub domain: Domain,
    pub n1: usize,
    pub n2: usize,
}

fn axis(a: f64, b: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        0.5 * (a + b)
    } else if i + 1 == n {
        b
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

impl Grid {
    pub fn new(domain: Domain, n1: usize, n2: usize) -> Self {
        Grid { domain, n1, n2 }
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (axis(self.domain.u1.0, self.domain.u1.1, self.n1, i), axis(self.domain.u2.0, self.domain.u2.1, self.n2, j))
    }

    pub fn nodes(&self) -> Vec<(f64, f64)> {
        (0..self.n1).flat_map(|i| (0..self.n2).map(move |j| self.node(i, j))).collect()
    }

    /// Evaluates `f` at every node in parallel; the output follows node order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64, f64) -> T + Sync + Send,
    {
        self.nodes().into_par_iter().map(|(a, b)| f(a, b)).collect()
    }

    /// Like [`Grid::map`] but stops at the first error in node order.
    pub fn try_map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(f64, f64) -> Result<T> + Sync + Send,
    {
        self.map(f).into_iter().collect()
    }

    /// Tensor-product quadrature weights, see [`simpson_weights`].
    pub fn weights(&self) -> Result<Vec<f64>> {
        let (s1, s2) = self.domain.span();
        let w1 = simpson_weights(self.n1, s1)?;
        let w2 = simpson_weights(self.n2, s2)?;
        Ok(w1.iter().flat_map(|a| w2.iter().map(move |b| a * b)).collect())
    }

    /// Integrates node values (in node order). The sum runs sequentially
    /// so the result does not depend on the thread count.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        let w = self.weights()?;
        if w.len() != values.len() {
            return Err(GeometryError::InvalidInput(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                w.len()
            )));
        }
        Ok(w.iter().zip(values).map(|(a, b)| a * b).sum())
    }
}

/// One-dimensional composite Simpson weights for `n` equispaced nodes on
/// an interval of length `len`. With an odd number of intervals the last
/// three use the 3/8 rule; two nodes fall back to the trapezoid rule.
pub fn simpson_weights(n: usize, len: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(GeometryError::InvalidInput(format!("quadrature needs at least 2 nodes, got {n}")));
    }
    let m = n - 1;
    let h = len / m as f64;
    let mut w = vec![0.0; n];
    if m == 1 {
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return Ok(w);
    }
    let simpson_end = if m.is_multiple_of(2) { m } else { m - 3 };
    let mut i = 0;
    while i < simpson_end {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
    if simpson_end < m {
        let s = simpson_end;
        for (k, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            w[s + k] += 3.0 * h / 8.0 * c;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        for n in [2usize, 3, 4, 5, 8, 11] {
            let w = simpson_weights(n, 2.0).unwrap();
            let xs: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
            let int = |f: &dyn Fn(f64) -> f64| w.iter().zip(&xs).map(|(a, &x)| a * f(x)).sum::<f64>();
            assert!((int(&|_| 1.0) - 2.0).abs() < 1e-14);
            assert!((int(&|x| x) - 2.0).abs() < 1e-14);
            if n > 2 {
                assert!((int(&|x| x * x * x) - 4.0).abs() < 1e-13, "n = {n}");
            }
        }
    }

    #[test]
    fn grid_order_and_area() {
        let g = Grid::new(Domain::new(0.0, 1.0, 0.0, 3.0), 3, 4);
        let nodes = g.nodes();
        assert_eq!(nodes[0], (0.0, 0.0));
        assert_eq!(nodes[1], (0.0, 1.0));
        assert_eq!(nodes[4], (0.5, 0.0));
        assert_eq!(*nodes.last().unwrap(), (1.0, 3.0));
        assert!((g.integrate(&[1.0; 12]).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(g.map(|a, b| a + b), nodes.iter().map(|(a, b)| a + b).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_single_node() {
        assert!(simpson_weights(1, 1.0).is_err());
    }
}
