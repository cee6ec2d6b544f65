use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform interior grid `r_k = k * mesh`, `k = 1..=n`, on `[0, r_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid<T: Real> {
    r_max: T,
    n: usize,
    mesh: T,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_max: T, n: usize) -> Result<Self> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(Error::invalid("grid needs r_max > 0"));
        }
        if n < 3 {
            return Err(Error::invalid("grid needs at least 3 interior points"));
        }
        let mesh = r_max / T::of_usize(n + 1);
        let nodes = (1..=n).map(|k| mesh * T::of_usize(k)).collect();
        let weights = simpson_weights(n + 1, mesh)[1..=n].to_vec();
        Ok(Self { r_max, n, mesh, nodes, weights })
    }

    /// Grid with spacing at most `mesh` reaching at least `r_min`.
    pub fn with_mesh(r_min: T, mesh: T) -> Result<Self> {
        if !(mesh > T::zero()) || !(r_min > T::zero()) {
            return Err(Error::invalid("grid needs positive mesh and extent"));
        }
        let intervals = (r_min / mesh).ceil().to_usize().unwrap_or(0).max(4);
        Self::new(mesh * T::of_usize(intervals), intervals - 1)
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mesh(&self) -> T {
        self.mesh
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Quadrature weights at the interior nodes (boundary values vanish).
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn id(&self) -> String {
        format!("uniform(r_max={}, n={})", self.r_max, self.n)
    }

    /// Index of the first node with `r >= r0`, or `n` if none.
    pub fn first_at_or_beyond(&self, r0: T) -> usize {
        self.nodes.iter().position(|&r| r >= r0).unwrap_or(self.n)
    }
}

/// Composite Simpson weights on `m + 1` equispaced points (3/8 rule on the
/// last three intervals when `m` is odd); `m >= 2`.
pub fn simpson_weights<T: Real>(m: usize, mesh: T) -> Vec<T> {
    if m < 2 {
        return vec![mesh / T::lit(2.0); m + 1];
    }
    let mut w = vec![T::zero(); m + 1];
    let third = mesh / T::lit(3.0);
    let simpson_end = if m.is_multiple_of(2) { m } else { m - 3 };
    let mut k = 0;
    while k + 2 <= simpson_end {
        w[k] += third;
        w[k + 1] += third * T::lit(4.0);
        w[k + 2] += third;
        k += 2;
    }
    if simpson_end < m {
        let e = mesh * T::lit(3.0 / 8.0);
        let s = simpson_end;
        w[s] += e;
        w[s + 1] += e * T::lit(3.0);
        w[s + 2] += e * T::lit(3.0);
        w[s + 3] += e;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_mesh() {
        let g = RadialGrid::new(10.0f64, 9).unwrap();
        assert_eq!(g.mesh(), 1.0);
        assert_eq!(g.nodes()[0], 1.0);
        assert_eq!(g.nodes()[8], 9.0);
    }

    #[test]
    fn simpson_integrates_quartic_vanishing_at_ends() {
        for n in [9usize, 10, 41, 64] {
            let g = RadialGrid::new(2.0f64, n).unwrap();
            let f = |r: f64| r * r * (2.0 - r) * (2.0 - r);
            let q: f64 = g.nodes().iter().zip(g.weights()).map(|(&r, &w)| w * f(r)).sum();
            // Exact value 16/15.
            assert!((q - 16.0 / 15.0).abs() < g.mesh().powi(4) + 1e-14, "n={n} q={q}");
            assert!(g.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn mesh_constructor_covers_extent() {
        let g = RadialGrid::with_mesh(5.05f64, 0.1).unwrap();
        assert!(g.r_max() >= 5.05 && g.mesh() <= 0.1 + 1e-15);
    }
}
