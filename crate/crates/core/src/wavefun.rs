//! Bound-state eigenfunctions on a uniform radial grid.
//!
//! Three candidate carrier functions are built from the same exponents; only
//! the hypergeometric one solves `HΦ = EΦ`. [`adjudicate`] measures each
//! candidate against the oracle residual so the choice is made numerically.

use serde::{Deserialize, Serialize};

use crate::coordmap::CoordinateMap;
use crate::error::{Error, Result};
use crate::grid::{RadialFunction, RadialGrid};
use crate::oracle;
use crate::params::{potential_zw, NatanzonParams};
use crate::specfun::gauss_2f1_terminating;
use crate::spectrum::BoundState;

/// Largest oracle residual accepted for an eigenfunction.
pub const RESIDUAL_TOLERANCE: f64 = 1e-5;
/// Edge decay required of a normalizable function, relative to its maximum.
pub const EDGE_DECAY: f64 = 1e-6;

/// Candidate forms of the carrier function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierForm {
    /// `z^{β/2} (1−z)^{(δ+1)/2} ₂F₁(−ν, α−1; 1+β; z)`
    Printed,
    /// `R^{1/4}` times [`CarrierForm::Printed`].
    PrintedQuarticRoot,
    /// `R^{1/4} z^{β/2} (1−z)^{δ/2} ₂F₁(−ν, α−ν; 1+β; z)`
    Hypergeometric,
}

impl CarrierForm {
    pub const ALL: [CarrierForm; 3] = [Self::Printed, Self::PrintedQuarticRoot, Self::Hypergeometric];
}

/// Unnormalized carrier value at `(z, w = 1−z)`.
pub fn carrier_value(params: &NatanzonParams, state: &BoundState, form: CarrierForm, z: f64, w: f64) -> Result<f64> {
    if z <= 0.0 || w <= 0.0 {
        return Ok(0.0);
    }
    let (b, d, nu) = (state.beta, state.delta, state.nu);
    let value = match form {
        CarrierForm::Printed | CarrierForm::PrintedQuarticRoot => {
            let f = gauss_2f1_terminating(nu, state.alpha - 1.0, 1.0 + b, z)?;
            let base = z.powf(0.5 * b) * w.powf(0.5 * (d + 1.0)) * f;
            if form == CarrierForm::Printed {
                base
            } else {
                params.r_poly(z).powf(0.25) * base
            }
        }
        CarrierForm::Hypergeometric => {
            let f = gauss_2f1_terminating(nu, state.alpha - nu as f64, 1.0 + b, z)?;
            params.r_poly(z).powf(0.25) * z.powf(0.5 * b) * w.powf(0.5 * d) * f
        }
    };
    Ok(value)
}

/// Outer radius at which a state with decay exponent `δ` has fallen below
/// [`EDGE_DECAY`] with a margin, never less than `floor`.
pub fn recommended_r_max(state: &BoundState, floor: f64) -> f64 {
    if state.delta > 0.0 {
        floor.max((16.0 / state.delta).ceil())
    } else {
        floor
    }
}

/// Grid covering the map's range with `n` nodes.
pub fn default_grid(map: &CoordinateMap, n: usize) -> Result<RadialGrid> {
    let (lo, hi) = map.range();
    RadialGrid::new(lo, hi, n)
}

/// Potential sampled on `grid`. Where `V` is undefined (`z = 0` at a
/// half-line origin) the sample is zero; such nodes lie inside the excluded
/// edge stencils of every residual.
pub fn potential_on_grid(map: &CoordinateMap, grid: &RadialGrid) -> Result<Vec<f64>> {
    grid.points()
        .into_iter()
        .map(|r| {
            let (z, w) = map.zw_of_r(r)?;
            if z <= 0.0 || w <= 0.0 {
                Ok(0.0)
            } else {
                potential_zw(map.params(), z, w)
            }
        })
        .collect()
}

/// Unnormalized carrier sampled on `grid`.
pub fn carrier_on_grid(
    params: &NatanzonParams,
    state: &BoundState,
    form: CarrierForm,
    map: &CoordinateMap,
    grid: &RadialGrid,
) -> Result<RadialFunction> {
    let values = grid
        .points()
        .into_iter()
        .map(|r| {
            let (z, w) = map.zw_of_r(r)?;
            carrier_value(params, state, form, z, w)
        })
        .collect::<Result<Vec<f64>>>()?;
    RadialFunction::new(*grid, values)
}

/// Returns `K > 0` with `∫ (K f)² dr = 1`, and `K f`.
pub fn normalize(f: &RadialFunction) -> Result<(f64, RadialFunction)> {
    if f.max_abs() == 0.0 {
        return Err(Error::NonNormalizable("zero function".into()));
    }
    f.check_edges(EDGE_DECAY)
        .map_err(|e| Error::NonNormalizable(format!("no decay at the grid edge ({e})")))?;
    let k = 1.0 / f.norm_sq().sqrt();
    Ok((k, f.scaled(k)))
}

/// A normalized eigenfunction and how it was built.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub state: BoundState,
    pub form: CarrierForm,
    /// Normalization constant applied to the carrier.
    pub k: f64,
    pub func: RadialFunction,
}

pub fn eigenfunction(
    params: &NatanzonParams,
    state: &BoundState,
    map: &CoordinateMap,
    grid: &RadialGrid,
    form: CarrierForm,
) -> Result<Eigenfunction> {
    if state.threshold {
        return Err(Error::NonNormalizable(format!(
            "level {} sits on the threshold",
            state.nu
        )));
    }
    let raw = carrier_on_grid(params, state, form, map, grid)?;
    let (k, func) = normalize(&raw)?;
    Ok(Eigenfunction {
        state: *state,
        form,
        k,
        func,
    })
}

/// Oracle residual of each candidate form for one state.
#[derive(Debug, Clone, Serialize)]
pub struct CarrierAdjudication {
    pub nu: usize,
    pub residuals: Vec<(CarrierForm, f64)>,
    /// Smallest-residual form, if it meets [`RESIDUAL_TOLERANCE`].
    pub selected: Option<CarrierForm>,
}

pub fn adjudicate(
    params: &NatanzonParams,
    state: &BoundState,
    map: &CoordinateMap,
    grid: &RadialGrid,
) -> Result<CarrierAdjudication> {
    let v = potential_on_grid(map, grid)?;
    let mut residuals = Vec::new();
    for form in CarrierForm::ALL {
        let f = carrier_on_grid(params, state, form, map, grid)?;
        residuals.push((form, oracle::residual(&v, &f, state.energy)?));
    }
    let best = residuals
        .iter()
        .cloned()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|(_, r)| *r < RESIDUAL_TOLERANCE)
        .map(|(f, _)| f);
    Ok(CarrierAdjudication {
        nu: state.nu,
        residuals,
        selected: best,
    })
}
