use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform cell-midpoint lattice centred on the origin.
///
/// Node `k` along every axis sits at `(k − N/2 + ½)·spacing`, so the lattice
/// is symmetric and never contains the origin. The same type describes the
/// spatial grid `[−L, L]ⁿ` and its dual frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    points: usize,
    spacing: f64,
}

impl GridSpec {
    /// Grid over `[−L, L]ⁿ` with `N` cells per axis.
    pub fn centered(dim: usize, half_width: f64, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid(format!("half width must be positive, got {half_width}")));
        }
        Self::with_spacing(dim, points, 2.0 * half_width / points as f64)
    }

    pub fn with_spacing(dim: usize, points: usize, spacing: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points < 2 || points % 2 != 0 {
            return Err(Error::invalid(format!(
                "points per axis must be even and at least 2, got {points}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self {
            dim,
            points,
            spacing,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.points as f64 * self.spacing
    }

    pub fn node_count(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * self.points as f64 + 0.5) * self.spacing
    }

    /// Axis nodes in ascending order.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.node(k)).collect()
    }

    /// Multi-index of a flat node index; axis 0 varies slowest.
    #[inline]
    pub fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points;
            idx /= self.points;
        }
    }

    #[inline]
    pub fn flat_index(&self, k: &[usize]) -> usize {
        k.iter().fold(0, |acc, &ki| acc * self.points + ki)
    }

    #[inline]
    pub fn coords(&self, idx: usize, out: &mut [f64]) {
        let mut rem = idx;
        for a in (0..self.dim).rev() {
            out[a] = self.node(rem % self.points);
            rem /= self.points;
        }
    }

    /// The frequency lattice paired with this grid: spacing `π/L`, same
    /// point count, Nyquist extent `π/h`.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            points: self.points,
            spacing: PI / self.half_width(),
        }
    }

    /// Same spacing, `factor` times as many points (zero-padding support).
    pub fn padded(&self, factor: usize) -> Self {
        Self {
            dim: self.dim,
            points: self.points * factor,
            spacing: self.spacing,
        }
    }

    /// Same extent, twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            dim: self.dim,
            points: self.points * 2,
            spacing: self.spacing / 2.0,
        }
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_nodes_avoid_origin() {
        let g = GridSpec::centered(2, 8.0, 64).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.node(0), -8.0 + 0.125);
        assert_eq!(g.node(31), -0.125);
        assert_eq!(g.node(32), 0.125);
        assert!((g.dual().spacing() - PI / 8.0).abs() < 1e-15);
        assert!((g.dual().node(63) - (PI / 0.25 - g.dual().spacing() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(GridSpec::centered(2, 8.0, 63).is_err());
        assert!(GridSpec::centered(2, 0.0, 64).is_err());
        assert!(matches!(GridSpec::centered(4, 1.0, 4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::centered(3, 1.0, 4).unwrap();
        let mut k = [0; 3];
        for idx in 0..g.node_count() {
            g.multi_index(idx, &mut k);
            assert_eq!(g.flat_index(&k), idx);
        }
    }
}
