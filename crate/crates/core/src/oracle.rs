//! Independent finite-difference Schrödinger solver.
//!
//! `H = −d²/dr² + V` on a uniform grid with Dirichlet walls at both ends is
//! the symmetric tridiagonal matrix `(2/h² + V_i, −1/h²)`. Its lowest levels
//! come from Sturm bisection on two grids (spacings `h` and `h/2`), combined
//! by Richardson extrapolation to cancel the `O(h²)` error.

use serde::Serialize;

use crate::coordmap::CoordinateMap;
use crate::error::{Error, Result};
use crate::grid::RadialFunction;
use crate::numerics::lowest_eigenvalues;
use crate::params::PtParams;

/// Richardson disagreement above which a result is flagged under-resolved.
pub const RESOLUTION_WARNING: f64 = 1e-3;
const BISECTION_TOL: f64 = 1e-13;

/// A discretized problem on `[r_lo, r_hi]` with `n` interior nodes, sampled
/// at spacing `h` and again at `h/2`.
#[derive(Debug, Clone)]
pub struct GridProblem {
    r_lo: f64,
    r_hi: f64,
    n: usize,
    v_coarse: Vec<f64>,
    v_fine: Vec<f64>,
}

fn interior(r_lo: f64, r_hi: f64, n: usize) -> (f64, impl Iterator<Item = f64>) {
    let h = (r_hi - r_lo) / (n + 1) as f64;
    (h, (1..=n).map(move |i| r_lo + i as f64 * h))
}

impl GridProblem {
    pub fn new<F: FnMut(f64) -> Result<f64>>(r_lo: f64, r_hi: f64, n: usize, mut v: F) -> Result<Self> {
        if n < 10 || !(r_hi > r_lo) {
            return Err(Error::GridMismatch(format!(
                "oracle grid needs r_hi > r_lo and n >= 10, got [{r_lo}, {r_hi}], n = {n}"
            )));
        }
        let mut sample = |m: usize| -> Result<Vec<f64>> {
            let (_, rs) = interior(r_lo, r_hi, m);
            let vals = rs.map(&mut v).collect::<Result<Vec<f64>>>()?;
            if let Some(bad) = vals.iter().find(|x| !x.is_finite()) {
                return Err(Error::GridMismatch(format!("non-finite potential sample {bad}")));
            }
            Ok(vals)
        };
        let v_coarse = sample(n)?;
        let v_fine = sample(2 * n + 1)?;
        Ok(Self {
            r_lo,
            r_hi,
            n,
            v_coarse,
            v_fine,
        })
    }

    /// Pöschl-Teller on `(0, r_max]` from its closed form in `r`.
    pub fn pt(pt: &PtParams, r_max: f64, n: usize) -> Result<Self> {
        Self::new(0.0, r_max, n, |r| Ok(pt.potential_in_r(r)))
    }

    /// The potential through a coordinate map, over the map's whole range.
    pub fn from_map(map: &CoordinateMap, n: usize) -> Result<Self> {
        let (lo, hi) = map.range();
        Self::new(lo, hi, n, |r| map.potential_at(r))
    }

    pub fn spacing(&self) -> f64 {
        (self.r_hi - self.r_lo) / (self.n + 1) as f64
    }

    pub fn interior_points(&self) -> usize {
        self.n
    }

    pub fn v_min(&self) -> f64 {
        self.v_fine.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Result of [`grid_spectrum`].
#[derive(Debug, Clone, Serialize)]
pub struct GridSpectrum {
    /// Richardson-extrapolated levels, ascending.
    pub eigenvalues: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Largest `|fine − coarse| / max(1, |fine|)`.
    pub disagreement: f64,
    pub warnings: Vec<String>,
}

impl GridSpectrum {
    pub fn under_resolved(&self) -> bool {
        !self.warnings.is_empty()
    }
}

/// Lowest `k` Dirichlet eigenvalues of `−d²/dr² + V` at spacing `h`.
pub fn dirichlet_eigenvalues(v: &[f64], h: f64, k: usize) -> Vec<f64> {
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = v.iter().map(|x| 2.0 * inv_h2 + x).collect();
    let off = vec![-inv_h2; v.len() - 1];
    lowest_eigenvalues(&diag, &off, k, BISECTION_TOL)
}

pub fn grid_spectrum(problem: &GridProblem, k: usize) -> Result<GridSpectrum> {
    if k == 0 {
        return Err(Error::GridMismatch("k must be at least 1".into()));
    }
    let h = problem.spacing();
    let coarse = dirichlet_eigenvalues(&problem.v_coarse, h, k);
    let fine = dirichlet_eigenvalues(&problem.v_fine, 0.5 * h, k);
    let eigenvalues: Vec<f64> = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    let disagreement = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (f - c).abs() / f.abs().max(1.0))
        .fold(0.0, f64::max);
    let mut warnings = Vec::new();
    if disagreement > RESOLUTION_WARNING {
        warnings.push(format!(
            "two-resolution disagreement {disagreement:.3e} exceeds {RESOLUTION_WARNING:e}"
        ));
    }
    let v_min = problem.v_min();
    if v_min < 0.0 && h > 1.0 / (10.0 * (-v_min).sqrt()) {
        warnings.push(format!("spacing {h:.3e} does not resolve the well depth {v_min:.3e}"));
    }
    Ok(GridSpectrum {
        eigenvalues,
        coarse,
        fine,
        disagreement,
        warnings,
    })
}

/// `max |−ψ″ + Vψ − Eψ| / (s·max|ψ|)` over interior nodes, where `s = |E|`,
/// or `max|Vψ|/max|ψ|` when `E` is zero. The outer stencil half-width on each
/// side is excluded.
pub fn residual(v: &[f64], psi: &RadialFunction, energy: f64) -> Result<f64> {
    if v.len() != psi.values.len() {
        return Err(Error::GridMismatch(format!(
            "{} potential samples for {} wavefunction samples",
            v.len(),
            psi.values.len()
        )));
    }
    let diff = psi.grid.diff();
    let d2 = diff.d2(&psi.values);
    let max_psi = psi.max_abs();
    if max_psi == 0.0 {
        return Ok(0.0);
    }
    let scale = if energy.abs() > 1e-12 {
        energy.abs()
    } else {
        v.iter()
            .zip(&psi.values)
            .map(|(a, b)| (a * b).abs())
            .fold(0.0, f64::max)
            / max_psi
    };
    let edge = diff.half_width();
    let n = v.len();
    let worst = (edge..n - edge)
        .map(|i| (-d2[i] + (v[i] - energy) * psi.values[i]).abs())
        .fold(0.0, f64::max);
    Ok(worst / (scale * max_psi))
}
