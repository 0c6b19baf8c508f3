//! Structured chart domains.
//!
//! A chart axis is either periodic (`n` nodes at `start + i h`, `h = length / n`)
//! or open. Open axes are cell centred: the `n` interior nodes sit at
//! `start + (i + 1/2) h` and cover `[start, start + length]`, and [`MARGIN`]
//! extra nodes are appended on either side. Quadrature only ever visits the
//! interior nodes, so five-point stencils never reach past the stored data
//! there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of the ghost band around an open axis.
pub const MARGIN: usize = 2;

/// Smallest admissible node count along an axis.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub start: f64,
    pub length: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn periodic(n: usize, length: f64) -> Self {
        Axis { n, start: 0.0, length, periodic: true }
    }

    pub fn open(n: usize, start: f64, end: f64) -> Self {
        Axis { n, start, length: end - start, periodic: false }
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Number of stored nodes, ghost band included.
    pub fn stored(&self) -> usize {
        if self.periodic {
            self.n
        } else {
            self.n + 2 * MARGIN
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        let h = self.spacing();
        if self.periodic {
            self.start + i as f64 * h
        } else {
            self.start + (i as f64 - MARGIN as f64 + 0.5) * h
        }
    }

    /// Stored indices that carry quadrature weight.
    pub fn interior(&self) -> std::ops::Range<usize> {
        if self.periodic {
            0..self.n
        } else {
            MARGIN..MARGIN + self.n
        }
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior().contains(&i)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.n < MIN_NODES {
            return Err(Error::InvalidGrid(format!("{name}: need at least {MIN_NODES} nodes, got {}", self.n)));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::InvalidGrid(format!("{name}: extent must be positive, got {}", self.length)));
        }
        Ok(())
    }
}

/// Topological type of the chart, read off the periodicity flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    Torus,
    Cylinder,
    Patch,
}

/// A rectangular chart domain. For a twisted torus, stepping once around the
/// `u` period lands at `v + twist`, i.e. `F(u + Lu, v) = F(u, v + twist)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub u: Axis,
    pub v: Axis,
    pub twist: f64,
}

impl Grid2D {
    pub fn new(u: Axis, v: Axis) -> Result<Self> {
        u.validate("u")?;
        v.validate("v")?;
        Ok(Grid2D { u, v, twist: 0.0 })
    }

    pub fn with_twist(mut self, twist: f64) -> Result<Self> {
        if twist != 0.0 && !(self.u.periodic && self.v.periodic) {
            return Err(Error::InvalidGrid("a twist needs both axes periodic".into()));
        }
        self.twist = twist;
        Ok(self)
    }

    pub fn torus(nu: usize, nv: usize, lu: f64, lv: f64) -> Result<Self> {
        Self::new(Axis::periodic(nu, lu), Axis::periodic(nv, lv))
    }

    pub fn kind(&self) -> ChartKind {
        match (self.u.periodic, self.v.periodic) {
            (true, true) => ChartKind::Torus,
            (false, false) => ChartKind::Patch,
            _ => ChartKind::Cylinder,
        }
    }

    pub fn nu(&self) -> usize {
        self.u.stored()
    }

    pub fn nv(&self) -> usize {
        self.v.stored()
    }

    pub fn len(&self) -> usize {
        self.nu() * self.nv()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv() + j
    }

    #[inline]
    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / self.nv(), k % self.nv())
    }

    pub fn point(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.split(k);
        (self.u.coord(i), self.v.coord(j))
    }

    pub fn is_interior(&self, k: usize) -> bool {
        let (i, j) = self.split(k);
        self.u.is_interior(i) && self.v.is_interior(j)
    }

    /// Quadrature weight of node `k` with respect to `du dv`.
    pub fn weight(&self, k: usize) -> f64 {
        if self.is_interior(k) {
            self.u.spacing() * self.v.spacing()
        } else {
            0.0
        }
    }

    /// Area of the integration domain in coordinate units.
    pub fn domain_area(&self) -> f64 {
        self.u.length * self.v.length
    }

    /// Same chart with `n` interior nodes per unit of the given factor.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let scale = |a: Axis| Axis { n: ((a.n as f64) * factor).round() as usize, ..a };
        Grid2D::new(scale(self.u), scale(self.v))?.with_twist(self.twist)
    }

    pub fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::GridMismatch { expected: self.len(), actual });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_axis_is_cell_centred() {
        let a = Axis::open(8, 0.0, 1.0);
        assert_eq!(a.stored(), 12);
        assert!((a.coord(MARGIN) - 1.0 / 16.0).abs() < 1e-15);
        assert!((a.coord(MARGIN + 7) - 15.0 / 16.0).abs() < 1e-15);
        assert_eq!(a.interior(), 2..10);
    }

    #[test]
    fn weights_sum_to_domain_area() {
        let g = Grid2D::new(Axis::open(10, -1.0, 2.0), Axis::periodic(12, 5.0)).unwrap();
        let total: f64 = (0..g.len()).map(|k| g.weight(k)).sum();
        assert!((total - 15.0).abs() < 1e-12);
        assert_eq!(g.kind(), ChartKind::Cylinder);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(Grid2D::torus(4, 16, 1.0, 1.0).is_err());
        assert!(Grid2D::torus(16, 16, 0.0, 1.0).is_err());
    }

    #[test]
    fn twist_needs_torus() {
        let g = Grid2D::new(Axis::open(8, 0.0, 1.0), Axis::periodic(8, 1.0)).unwrap();
        assert!(g.with_twist(0.3).is_err());
    }
}
