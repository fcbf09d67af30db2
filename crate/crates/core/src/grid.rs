//! Uniform radial grids and functions sampled on them.

use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::{simpson_uniform, UniformDiff};
use crate::report::fmt_num;

/// `n` equally spaced nodes from `r_lo` to `r_hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_lo: f64,
    h: f64,
    n: usize,
}

impl RadialGrid {
    pub fn new(r_lo: f64, r_hi: f64, n: usize) -> Result<Self> {
        if n < 16 || !(r_hi > r_lo) || !r_lo.is_finite() || !r_hi.is_finite() {
            return Err(Error::GridMismatch(format!(
                "grid needs r_hi > r_lo and at least 16 nodes, got [{r_lo}, {r_hi}] with {n}"
            )));
        }
        Ok(Self {
            r_lo,
            h: (r_hi - r_lo) / (n - 1) as f64,
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    pub fn r_hi(&self) -> f64 {
        self.r(self.n - 1)
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_lo + i as f64 * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.r(i)).collect()
    }

    /// Eighth-order difference operator for this spacing.
    pub fn diff(&self) -> UniformDiff {
        UniformDiff::eighth_order(self.h)
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.n == other.n
            && (self.r_lo - other.r_lo).abs() <= 1e-12 * (1.0 + self.r_lo.abs())
            && (self.h - other.h).abs() <= 1e-12 * self.h
    }
}

/// Values sampled on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonNormalizable("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(grid: RadialGrid, mut f: F) -> Result<Self> {
        let values = grid.points().into_iter().map(&mut f).collect();
        Self::new(grid, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `∫ f g dr` by composite Simpson.
    pub fn inner(&self, other: &RadialFunction) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("inner product on different grids".into()));
        }
        let prod: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(simpson_uniform(&prod, self.grid.spacing()))
    }

    pub fn norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        simpson_uniform(&sq, self.grid.spacing())
    }

    /// Interior sign changes, ignoring samples below `1e-10·max|f|`.
    pub fn sign_changes(&self) -> usize {
        let floor = 1e-10 * self.max_abs();
        let mut last = 0.0f64;
        let mut count = 0;
        for &v in &self.values {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Errors unless both end samples are below `rel·max|f|`.
    pub fn check_edges(&self, rel: f64) -> Result<()> {
        let max = self.max_abs();
        let edge = self.values[0].abs().max(self.values[self.values.len() - 1].abs());
        if edge > rel * max {
            Err(Error::GridEdge { edge, max })
        } else {
            Ok(())
        }
    }

    /// CSV with columns `r,<column>`.
    pub fn write_csv<W: Write>(&self, mut out: W, column: &str) -> Result<()> {
        writeln!(out, "r,{column}")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", fmt_num(self.grid.r(i)), fmt_num(*v))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = RadialGrid::new(0.0, 10.0, 101).unwrap();
        assert_eq!(g.spacing(), 0.1);
        assert_eq!(g.r_hi(), 10.0);
        assert!(RadialGrid::new(1.0, 0.0, 101).is_err());
        assert!(RadialGrid::new(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn quadrature_and_nodes() {
        let g = RadialGrid::new(0.0, std::f64::consts::PI, 201).unwrap();
        let f = RadialFunction::from_fn(g, |r| r.sin()).unwrap();
        assert!((f.norm_sq() - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        assert_eq!(f.sign_changes(), 0);
        let f2 = RadialFunction::from_fn(g, |r| (2.0 * r).sin()).unwrap();
        assert_eq!(f2.sign_changes(), 1);
        assert!(f.inner(&f2).unwrap().abs() < 1e-8);
        assert!(f.check_edges(1e-6).is_ok());
        let c = RadialFunction::from_fn(g, |r| r.cos()).unwrap();
        assert!(matches!(c.check_edges(1e-6), Err(Error::GridEdge { .. })));
    }

    #[test]
    fn mismatched_lengths() {
        let g = RadialGrid::new(0.0, 1.0, 20).unwrap();
        assert!(RadialFunction::new(g, vec![0.0; 19]).is_err());
        let g2 = RadialGrid::new(0.0, 1.0, 21).unwrap();
        let a = RadialFunction::new(g, vec![1.0; 20]).unwrap();
        let b = RadialFunction::new(g2, vec![1.0; 21]).unwrap();
        assert!(a.inner(&b).is_err());
    }
}
