//! Uniform 1D grid and sampled wavefunction.

use crate::error::{Error, Result};

/// Uniform mesh on `[r_min, r_max]` with `points` nodes.
///
/// Used both as a radial mesh (`r_min > 0`, enforced by the BVP
/// assembler) and as a Cartesian mesh on `[-L, L]` for the ground-state
/// solver, where negative coordinates are legitimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if points < 3 {
            return Err(Error::InvalidInput(format!("grid needs >= 3 points, got {points}")));
        }
        if !(r_min < r_max) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid needs r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        Ok(Self { r_min, r_max, points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points - 1) as f64
    }

    /// Coordinate of node `i`. The endpoints are returned exactly.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.points);
        if i == 0 {
            self.r_min
        } else if i == self.points - 1 {
            self.r_max
        } else {
            self.r_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.node(i))
    }
}

/// Real-valued wavefunction sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl WaveFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-point grid",
                values.len(),
                grid.points()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("wavefunction contains non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        let values = vec![0.0; grid.points()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Largest absolute pointwise gap to another wavefunction on the same
    /// grid.
    pub fn max_abs_diff(&self, other: &WaveFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("comparing wavefunctions on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = RadialGrid::new(0.1, 0.30000000000000004, 7).unwrap();
        assert_eq!(g.node(0), 0.1);
        assert_eq!(g.node(6), 0.30000000000000004);
        assert_eq!(g.nodes().count(), 7);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(RadialGrid::new(0.0, 1.0, 2).is_err());
        assert!(RadialGrid::new(1.0, 1.0, 5).is_err());
        assert!(RadialGrid::new(2.0, 1.0, 5).is_err());
    }

    #[test]
    fn wavefunction_checks_length_and_finiteness() {
        let g = RadialGrid::new(0.0, 1.0, 3).unwrap();
        assert!(WaveFunction::new(g, vec![0.0; 4]).is_err());
        assert!(WaveFunction::new(g, vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(WaveFunction::new(g, vec![0.0, 1.0, 0.0]).is_ok());
    }
}
