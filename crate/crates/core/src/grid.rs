//! Chebyshev–Gauss–Lobatto collocation grids.
//!
//! A [`Grid1D`] holds the `M` cosine-spaced nodes of a closed interval. A
//! [`Grid2D`] is the tensor product of two such grids, flattened in x-major
//! order: the point `(x_i, y_j)` lives at flat index `k = i * My + j`. The
//! Kronecker lifting in [`crate::dqm`] relies on this convention.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "interval bounds must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Chebyshev–Gauss–Lobatto nodes on an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    interval: Interval,
    nodes: Vec<f64>,
}

impl Grid1D {
    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes `M`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Evaluate `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    /// Index of the node exactly equal to `x`, if any.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        self.nodes.iter().position(|&n| n == x)
    }
}

/// Builds the `m_count` Chebyshev–Gauss–Lobatto nodes of `iv`:
///
/// `x_i = lo + (hi - lo) * (1 - cos(i * pi / (M - 1))) / 2`, `i = 0..M`.
///
/// The two endpoints are written as `lo` and `hi` exactly.
pub fn chebyshev_gauss_lobatto(iv: Interval, m_count: usize) -> Result<Grid1D> {
    if m_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "a Chebyshev-Gauss-Lobatto grid needs at least 2 nodes, got {m_count}"
        )));
    }
    let last = m_count - 1;
    let half = 0.5 * iv.length();
    let mut nodes: Vec<f64> = (0..m_count)
        .map(|i| {
            // Symmetric evaluation: cos(i*pi/(M-1)) = -cos((M-1-i)*pi/(M-1)),
            // so taking the sine form keeps mirrored nodes mirrored.
            let s = (PI * (2.0 * i as f64 - last as f64) / (2.0 * last as f64)).sin();
            iv.lo + half * (1.0 + s)
        })
        .collect();
    nodes[0] = iv.lo;
    nodes[last] = iv.hi;
    Ok(Grid1D { interval: iv, nodes })
}

/// Flattening order of a [`Grid2D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    /// `k = i * My + j`, with `i` indexing x and `j` indexing y.
    XMajor,
}

/// Tensor product of two Chebyshev grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    gx: Grid1D,
    gy: Grid1D,
    ordering: Ordering,
}

impl Grid2D {
    pub fn gx(&self) -> &Grid1D {
        &self.gx
    }

    pub fn gy(&self) -> &Grid1D {
        &self.gy
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn mx(&self) -> usize {
        self.gx.len()
    }

    pub fn my(&self) -> usize {
        self.gy.len()
    }

    /// Total number of points `Mx * My`.
    pub fn len(&self) -> usize {
        self.mx() * self.my()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flatten(&self, i: usize, j: usize) -> usize {
        flatten(i, j, self.my())
    }

    pub fn unflatten(&self, k: usize) -> (usize, usize) {
        unflatten(k, self.my())
    }

    /// Coordinates of flat index `k`.
    pub fn point(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.unflatten(k);
        (self.gx.nodes[i], self.gy.nodes[j])
    }

    /// All points in flattening order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// True when flat index `k` lies on one of the four edges.
    pub fn is_boundary(&self, k: usize) -> bool {
        let (i, j) = self.unflatten(k);
        i == 0 || j == 0 || i + 1 == self.mx() || j + 1 == self.my()
    }

    /// Flat indices of the boundary points, ascending.
    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.is_boundary(k)).collect()
    }

    /// Flat indices of the interior points, ascending (still x-major).
    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.is_boundary(k)).collect()
    }

    /// Evaluate `f` at every point, in flattening order.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.points().map(|(x, y)| f(x, y)).collect()
    }
}

pub fn tensor_grid(gx: Grid1D, gy: Grid1D) -> Grid2D {
    Grid2D {
        gx,
        gy,
        ordering: Ordering::XMajor,
    }
}

/// x-major flat index of `(i, j)` on a grid with `my` nodes in y.
pub fn flatten(i: usize, j: usize, my: usize) -> usize {
    i * my + j
}

pub fn unflatten(k: usize, my: usize) -> (usize, usize) {
    (k / my, k % my)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(m: usize) -> Grid1D {
        chebyshev_gauss_lobatto(Interval::unit(), m).unwrap()
    }

    #[test]
    fn small_grids() {
        assert_eq!(unit(2).nodes(), &[0.0, 1.0]);
        let g3 = unit(3);
        assert_eq!(g3.nodes()[0], 0.0);
        assert!((g3.nodes()[1] - 0.5).abs() < 1e-16);
        assert_eq!(g3.nodes()[2], 1.0);

        let g5 = chebyshev_gauss_lobatto(Interval::new(-1.0, 1.0).unwrap(), 5).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [-1.0, -h, 0.0, h, 1.0];
        for (a, b) in g5.nodes().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            chebyshev_gauss_lobatto(Interval::unit(), 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn properties_for_all_sizes() {
        let iv = Interval::new(-0.3, 2.7).unwrap();
        for m in 2..=500 {
            let g = chebyshev_gauss_lobatto(iv, m).unwrap();
            let x = g.nodes();
            assert_eq!(x[0], iv.lo());
            assert_eq!(x[m - 1], iv.hi());
            assert!(x.windows(2).all(|w| w[0] < w[1]), "not increasing at M={m}");
            let mid = iv.lo() + iv.hi();
            for i in 0..m {
                let s = x[i] + x[m - 1 - i];
                assert!((s - mid).abs() <= 1e-14 * mid.abs().max(1.0), "M={m} i={i}");
            }
        }
    }

    proptest! {
        #[test]
        fn affine_covariance(a in -10.0f64..10.0, len in 0.01f64..20.0, m in 2usize..60) {
            let b = a + len;
            let g = chebyshev_gauss_lobatto(Interval::new(a, b).unwrap(), m).unwrap();
            let u = unit(m);
            for (x, t) in g.nodes().iter().zip(u.nodes()) {
                let expected = a + (b - a) * t;
                let scale = a.abs().max(b.abs()).max(1.0);
                prop_assert!((x - expected).abs() <= 1e-14 * scale);
            }
        }
    }

    #[test]
    fn tensor_ordering() {
        let g = tensor_grid(unit(2), unit(2));
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_eq!(flatten(1, 0, 3), 3);

        let g = tensor_grid(unit(4), unit(5));
        assert_eq!(g.len(), 20);
        for i in 0..4 {
            for j in 0..5 {
                assert_eq!(g.unflatten(g.flatten(i, j)), (i, j));
            }
        }
        assert_eq!(g.boundary_indices().len(), 20 - 2 * 3);
        assert_eq!(g.interior_indices(), vec![6, 7, 8, 11, 12, 13]);
    }
}
