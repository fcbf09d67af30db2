//! The so(2,1) realization acting on fixed-weight sectors `Ψ = e^{imφ}Φ(r)`.
//!
//! With `∂φ → im` every operator becomes a radial one:
//!
//! ```text
//! J₀Φ = mΦ
//! J±Φ = ±gΦ′ + m k Φ ± ½[(1−z)(1∓p)/√z + b]Φ        (weight m ± 1)
//! g = √z(z−1)/z′ = −√R/(2√z),  k = (1+z)/(2√z),  b = (z−1) z″√z / z′²
//! Q = J₀(J₀ − 1) − J₊J₋
//!   = (R/4z) ∂² − (1−z)² m²/(4z) + p m (1−z²)/(2z)
//!     + (1−z)²/(4z) [z²(2z‴/z′³ − 3z″²/z′⁴) − (p² − 1)]
//! ```
//!
//! The brackets close exactly: `[J₀, J±] = ±J±`, `[J₊, J₋] = −2J₀`.
//! Radial derivatives use eighth-order differences; each application
//! widens the band of unreliable edge nodes (`margin`) by the stencil
//! half-width, and all norms skip it.

use serde::Serialize;

use crate::coordmap::CoordinateMap;
use crate::error::{Error, Result};
use crate::grid::{RadialFunction, RadialGrid};
use crate::numerics::UniformDiff;
use crate::params::NatanzonParams;
use crate::spectrum::BoundState;
use crate::wavefun::{carrier_on_grid, potential_on_grid, CarrierForm, EDGE_DECAY};

/// A radial function tagged with its `J₀` weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MSectorFunction {
    pub func: RadialFunction,
    pub m: f64,
    /// Nodes at each end whose values are not trustworthy.
    pub margin: usize,
}

impl MSectorFunction {
    pub fn new(func: RadialFunction, m: f64) -> Self {
        Self { func, m, margin: 0 }
    }

    /// `max |f|` over nodes outside the margin.
    pub fn interior_max(&self) -> f64 {
        interior_max(&self.func.values, self.margin)
    }
}

fn interior_max(values: &[f64], margin: usize) -> f64 {
    let n = values.len();
    if 2 * margin >= n {
        return 0.0;
    }
    values[margin..n - margin].iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `max |a − b|` outside the larger margin.
fn interior_diff(a: &MSectorFunction, b: &MSectorFunction) -> f64 {
    let margin = a.margin.max(b.margin);
    let d: Vec<f64> = a.func.values.iter().zip(&b.func.values).map(|(x, y)| x - y).collect();
    interior_max(&d, margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Generator {
    J0,
    JPlus,
    JMinus,
}

/// Coefficients of `J± = d_r ∂r + m·m_coeff + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorCoefficients {
    pub d_r: f64,
    pub m_coeff: f64,
    pub constant: f64,
}

/// Coefficients of `Q = d2 ∂² + m2·m² + pm·p·m + rest`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirCoefficients {
    pub d2: f64,
    pub m2: f64,
    pub pm: f64,
    pub rest: f64,
}

struct Local {
    z: f64,
    w: f64,
    sqrt_z: f64,
    r: f64,
    rp: f64,
}

fn local(params: &NatanzonParams, z: f64, w: f64) -> Result<Local> {
    if !(z > 0.0 && w > 0.0) {
        return Err(Error::Domain {
            value: z,
            domain: "open interval (0, 1)",
        });
    }
    let r = params.r_poly(z);
    if r <= 0.0 {
        return Err(Error::SingularQuadratic { z, value: r });
    }
    Ok(Local {
        z,
        w,
        sqrt_z: z.sqrt(),
        r,
        rp: params.r_poly_dz(z),
    })
}

/// `b = (z−1) z″√z / z′² = −(1−2z)/√z + (1−z)√z R′/(2R)`
fn b_term(l: &Local) -> f64 {
    -(l.w - l.z) / l.sqrt_z + l.w * l.sqrt_z * l.rp / (2.0 * l.r)
}

/// Coefficients of `J₊` (`sign = +1`) or `J₋` (`sign = −1`) at `(z, 1−z)`.
pub fn generator_coefficients(
    params: &NatanzonParams,
    z: f64,
    w: f64,
    p: f64,
    sign: f64,
) -> Result<GeneratorCoefficients> {
    let l = local(params, z, w)?;
    let g = -l.r.sqrt() / (2.0 * l.sqrt_z);
    Ok(GeneratorCoefficients {
        d_r: sign * g,
        m_coeff: (1.0 + z) / (2.0 * l.sqrt_z),
        constant: sign * 0.5 * (w * (1.0 - sign * p) / l.sqrt_z + b_term(&l)),
    })
}

/// Coefficients of the Casimir at `(z, 1−z)`.
pub fn casimir_coefficients(params: &NatanzonParams, z: f64, w: f64, p: f64) -> Result<CasimirCoefficients> {
    let l = local(params, z, w)?;
    let (r, rp, rpp) = (l.r, l.rp, 2.0 * params.a);
    let sq = r.sqrt();
    // with s(z) = dz/dr: σw = (1−z) s′/s and ρ = (1−z) s″/s, finite as z → 1
    let sigma_w = (w - z) / z - w * rp / (2.0 * r);
    let s2 = -4.0 / sq - 2.0 * (w - z) * rp / (r * sq) - z * w * rpp / (r * sq) + 1.5 * z * w * rp * rp / (r * r * sq);
    let rho = s2 * sq / (2.0 * z);
    // (1−z)² z² (2s″/s − (s′/s)²)
    let schwarz = z * z * (2.0 * w * rho - sigma_w * sigma_w);
    Ok(CasimirCoefficients {
        d2: r / (4.0 * z),
        m2: -w * w / (4.0 * z),
        pm: (1.0 - z * z) / (2.0 * z),
        rest: (schwarz - w * w * (p * p - 1.0)) / (4.0 * z),
    })
}

/// `𝒢 = R/(4z)`, the factor in `(Q − q) = 𝒢 (E − H)`.
pub fn consistency_gauge(params: &NatanzonParams, z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain {
            value: z,
            domain: "z > 0 (the gauge is singular at z = 0)",
        });
    }
    Ok(params.r_poly(z) / (4.0 * z))
}

/// Map values `(z, 1−z)` at every node of a grid, with the parameters.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub params: NatanzonParams,
    pub grid: RadialGrid,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    diff: UniformDiff,
}

impl GridGeometry {
    pub fn new(map: &CoordinateMap, grid: &RadialGrid) -> Result<Self> {
        let mut z = Vec::with_capacity(grid.len());
        let mut w = Vec::with_capacity(grid.len());
        for r in grid.points() {
            let (zi, wi) = map.zw_of_r(r)?;
            z.push(zi);
            w.push(wi);
        }
        Ok(Self {
            params: *map.params(),
            grid: *grid,
            z,
            w,
            diff: grid.diff(),
        })
    }

    fn valid(&self, i: usize) -> bool {
        self.z[i] > 0.0 && self.w[i] > 0.0
    }

    pub fn stencil_half_width(&self) -> usize {
        self.diff.half_width()
    }

    fn check(&self, f: &MSectorFunction) -> Result<()> {
        if !self.grid.same_as(&f.func.grid) {
            return Err(Error::GridMismatch("function and geometry grids differ".into()));
        }
        Ok(())
    }
}

fn generator_raw(which: Generator, f: &MSectorFunction, p: f64, geo: &GridGeometry) -> Result<MSectorFunction> {
    geo.check(f)?;
    let sign = match which {
        Generator::J0 => return Ok(f.clone()),
        Generator::JPlus => 1.0,
        Generator::JMinus => -1.0,
    };
    let d1 = geo.diff.d1(&f.func.values);
    let mut out = vec![0.0; f.func.values.len()];
    for (i, o) in out.iter_mut().enumerate() {
        if !geo.valid(i) {
            continue;
        }
        let c = generator_coefficients(&geo.params, geo.z[i], geo.w[i], p, sign)?;
        *o = c.d_r * d1[i] + (f.m * c.m_coeff + c.constant) * f.func.values[i];
    }
    Ok(MSectorFunction {
        func: RadialFunction {
            grid: f.func.grid,
            values: out,
        },
        m: f.m + sign,
        margin: f.margin + geo.stencil_half_width(),
    })
}

/// Apply `J₀`, `J₊` or `J₋`. The input must have decayed at both grid ends.
pub fn apply_generator(which: Generator, f: &MSectorFunction, p: f64, geo: &GridGeometry) -> Result<MSectorFunction> {
    if f.func.max_abs() > 0.0 {
        f.func.check_edges(EDGE_DECAY)?;
    }
    generator_raw(which, f, p, geo)
}

/// Which realization of the Casimir to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CasimirRoute {
    /// Closed second-order operator.
    Direct,
    /// `J₀(J₀ − 1) − J₊J₋`.
    Composed,
}

pub fn apply_casimir(f: &MSectorFunction, p: f64, geo: &GridGeometry, route: CasimirRoute) -> Result<MSectorFunction> {
    geo.check(f)?;
    if f.func.max_abs() > 0.0 {
        f.func.check_edges(EDGE_DECAY)?;
    }
    match route {
        CasimirRoute::Direct => {
            let d2 = geo.diff.d2(&f.func.values);
            let mut out = vec![0.0; d2.len()];
            for (i, o) in out.iter_mut().enumerate() {
                if !geo.valid(i) {
                    continue;
                }
                let c = casimir_coefficients(&geo.params, geo.z[i], geo.w[i], p)?;
                *o = c.d2 * d2[i] + (c.m2 * f.m * f.m + c.pm * p * f.m + c.rest) * f.func.values[i];
            }
            Ok(MSectorFunction {
                func: RadialFunction {
                    grid: f.func.grid,
                    values: out,
                },
                m: f.m,
                margin: f.margin + geo.stencil_half_width(),
            })
        }
        CasimirRoute::Composed => {
            let lowered = generator_raw(Generator::JMinus, f, p, geo)?;
            let back = generator_raw(Generator::JPlus, &lowered, p, geo)?;
            let values = f
                .func
                .values
                .iter()
                .zip(&back.func.values)
                .map(|(v, jj)| f.m * (f.m - 1.0) * v - jj)
                .collect();
            Ok(MSectorFunction {
                func: RadialFunction {
                    grid: f.func.grid,
                    values,
                },
                m: f.m,
                margin: back.margin,
            })
        }
    }
}

/// Max-norm residuals of `([J₀, J₊] − J₊) f` and `([J₊, J₋] + 2J₀) f`,
/// relative to `max|f|`.
pub fn commutator_residuals(f: &MSectorFunction, p: f64, geo: &GridGeometry) -> Result<(f64, f64)> {
    let scale = f.func.max_abs();
    if scale == 0.0 {
        return Ok((0.0, 0.0));
    }
    let jp = generator_raw(Generator::JPlus, f, p, geo)?;
    // J₀ acts by the weight of whatever it is applied to
    let j0_jp: Vec<f64> = jp.func.values.iter().map(|v| jp.m * v).collect();
    let jp_j0: Vec<f64> = jp.func.values.iter().map(|v| f.m * v).collect();
    let r1: Vec<f64> = (0..j0_jp.len())
        .map(|i| j0_jp[i] - jp_j0[i] - jp.func.values[i])
        .collect();
    let res_0pm = interior_max(&r1, jp.margin) / scale;

    let jm = generator_raw(Generator::JMinus, f, p, geo)?;
    let jp_jm = generator_raw(Generator::JPlus, &jm, p, geo)?;
    let jm_jp = generator_raw(Generator::JMinus, &jp, p, geo)?;
    let r2: Vec<f64> = (0..r1.len())
        .map(|i| jp_jm.func.values[i] - jm_jp.func.values[i] + 2.0 * f.m * f.func.values[i])
        .collect();
    let res_pm = interior_max(&r2, jp_jm.margin.max(jm_jp.margin)) / scale;
    Ok((res_0pm, res_pm))
}

/// `(c₊, c₋)` with `J₊Φ_ν = c₊ Φ^{(m+1)}` and `J₋Φ_ν = c₋ Φ^{(m−1)}`.
pub fn ladder_coefficients(state: &BoundState) -> Result<(f64, f64)> {
    let denom = 1.0 + state.beta;
    if denom.abs() < 1e-14 {
        return Err(Error::DivisionByZero);
    }
    let nu = state.nu as f64;
    Ok((-state.beta, -nu * (state.alpha - nu - 1.0 - state.beta) / denom))
}

/// The carrier of the neighbouring weight: `(α±1, β∓1, δ, ν±1)`.
pub fn shifted_state(state: &BoundState, direction: i32) -> Result<BoundState> {
    let d = direction as f64;
    if direction == -1 && state.nu == 0 {
        return Err(Error::LowestWeight);
    }
    let alpha = state.alpha + d;
    let beta = state.beta - d;
    Ok(BoundState {
        nu: (state.nu as i64 + direction as i64) as usize,
        alpha,
        beta,
        p: 0.5 * (alpha + beta),
        m: 0.5 * (alpha - beta),
        ..*state
    })
}

/// Result of comparing a ladder action with its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct LadderCheck {
    pub nu: usize,
    pub c_plus: f64,
    pub c_minus: f64,
    /// `max|J₊Φ − c₊Φ^{(m+1)}| / max|c₊Φ^{(m+1)}|`
    pub plus_residual: f64,
    /// `max|J₋Φ − c₋Φ^{(m−1)}| / max|Φ|`; for `ν = 0` this is `max|J₋Φ|/max|Φ|`.
    pub minus_residual: f64,
}

/// Unnormalized carriers on both sides of the ladder, compared pointwise.
pub fn ladder_check(state: &BoundState, map: &CoordinateMap, grid: &RadialGrid) -> Result<LadderCheck> {
    let params = *map.params();
    let geo = GridGeometry::new(map, grid)?;
    let phi = carrier_on_grid(&params, state, CarrierForm::Hypergeometric, map, grid)?;
    let f = MSectorFunction::new(phi, state.m);
    let (c_plus, c_minus) = ladder_coefficients(state)?;
    let scale = f.func.max_abs();

    let up = apply_generator(Generator::JPlus, &f, state.p, &geo)?;
    let up_state = shifted_state(state, 1)?;
    let target = carrier_on_grid(&params, &up_state, CarrierForm::Hypergeometric, map, grid)?.scaled(c_plus);
    let target = MSectorFunction {
        func: target,
        m: up.m,
        margin: up.margin,
    };
    let plus_residual = interior_diff(&up, &target) / target.interior_max();

    let down = apply_generator(Generator::JMinus, &f, state.p, &geo)?;
    let minus_residual = if state.nu == 0 {
        down.interior_max() / scale
    } else {
        let down_state = shifted_state(state, -1)?;
        let t = carrier_on_grid(&params, &down_state, CarrierForm::Hypergeometric, map, grid)?.scaled(c_minus);
        let t = MSectorFunction {
            func: t,
            m: down.m,
            margin: down.margin,
        };
        interior_diff(&down, &t) / scale
    };
    Ok(LadderCheck {
        nu: state.nu,
        c_plus,
        c_minus,
        plus_residual,
        minus_residual,
    })
}

/// `max|(Q − q)Ψ − 𝒢(E − H)Ψ|` outside the margin, with the state's `p, q, m`
/// and `E`, and the size `max|𝒢Ψ″|` of the leading term.
pub fn gauge_identity_residual(
    f: &MSectorFunction,
    state: &BoundState,
    geo: &GridGeometry,
    potential: &[f64],
) -> Result<(f64, f64)> {
    geo.check(f)?;
    let q_f = apply_casimir(f, state.p, geo, CasimirRoute::Direct)?;
    let d2 = geo.diff.d2(&f.func.values);
    let mut diff = vec![0.0; d2.len()];
    let mut lead = vec![0.0; d2.len()];
    for i in 0..d2.len() {
        if !geo.valid(i) {
            continue;
        }
        let gauge = consistency_gauge(&geo.params, geo.z[i])?;
        let v = f.func.values[i];
        let h_f = -d2[i] + potential[i] * v;
        diff[i] = (q_f.func.values[i] - state.q * v) - gauge * (state.energy * v - h_f);
        lead[i] = gauge * d2[i];
    }
    Ok((interior_max(&diff, q_f.margin), interior_max(&lead, q_f.margin)))
}

/// Explicit Pöschl-Teller generator coefficients in `t = tanh r`.
pub fn pt_generator_explicit(t: f64, p: f64, sign: f64) -> GeneratorCoefficients {
    GeneratorCoefficients {
        d_r: -0.5 * sign,
        m_coeff: (1.0 + t * t) / (2.0 * t),
        constant: ((2.0 * p + sign) * t * t - 2.0 * p + sign) / (4.0 * t),
    }
}

/// Explicit Pöschl-Teller Casimir coefficients in `t = tanh r`.
pub fn pt_casimir_explicit(t: f64, p: f64) -> CasimirCoefficients {
    let t2 = t * t;
    let t4 = t2 * t2;
    CasimirCoefficients {
        d2: 0.25,
        m2: -(1.0 - t2).powi(2) / (4.0 * t2),
        pm: (1.0 - t4) / (2.0 * t2),
        rest: ((1.0 - 4.0 * p * p) * (1.0 + t4) + (8.0 * p * p - 6.0) * t2) / (16.0 * t2),
    }
}

/// Largest coefficient mismatch between the general realization with
/// Pöschl-Teller constants and the explicit forms, over `t ∈ [0.05, 0.95]`.
pub fn pt_specialization_residual(params: &NatanzonParams, p: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..=90 {
        let t = 0.05 + 0.01 * i as f64;
        let (z, w) = (t * t, 1.0 - t * t);
        for sign in [1.0, -1.0] {
            let a = generator_coefficients(params, z, w, p, sign)?;
            let b = pt_generator_explicit(t, p, sign);
            for (x, y) in [(a.d_r, b.d_r), (a.m_coeff, b.m_coeff), (a.constant, b.constant)] {
                worst = worst.max((x - y).abs() / y.abs().max(1.0));
            }
        }
        let a = casimir_coefficients(params, z, w, p)?;
        let b = pt_casimir_explicit(t, p);
        for (x, y) in [(a.d2, b.d2), (a.m2, b.m2), (a.pm, b.pm), (a.rest, b.rest)] {
            worst = worst.max((x - y).abs() / y.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Gaussian bump `exp(−(r − center)²/width²)` on a grid.
pub fn gaussian_bump(grid: &RadialGrid, center: f64, width: f64, m: f64) -> Result<MSectorFunction> {
    let f = RadialFunction::from_fn(*grid, |r| (-((r - center) / width).powi(2)).exp())?;
    Ok(MSectorFunction::new(f, m))
}

/// Potential on the grid of a geometry (see [`potential_on_grid`]).
pub fn geometry_potential(map: &CoordinateMap, geo: &GridGeometry) -> Result<Vec<f64>> {
    potential_on_grid(map, &geo.grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{pt_to_natanzon, PtParams};
    use crate::spectrum::solve_spectrum;
    use crate::wavefun::default_grid;

    fn pt(a: f64, b: f64, shifted: bool) -> NatanzonParams {
        pt_to_natanzon(&PtParams::new(a, b, shifted).unwrap())
    }

    fn generic() -> NatanzonParams {
        NatanzonParams::new(20.0, 2.0, -1.0, 1.0, 1.0, 1.0)
    }

    fn geometry(p: &NatanzonParams, r_max: f64, n: usize) -> (CoordinateMap, GridGeometry) {
        let map = CoordinateMap::build(p, r_max, 4000).unwrap();
        let grid = default_grid(&map, n).unwrap();
        let geo = GridGeometry::new(&map, &grid).unwrap();
        (map, geo)
    }

    #[test]
    fn j0_is_the_weight() {
        let (_, geo) = geometry(&pt(2.0, 1.0, false), 20.0, 2001);
        let f = gaussian_bump(&geo.grid, 5.0, 1.0, 1.0).unwrap();
        let out = apply_generator(Generator::J0, &f, 1.5, &geo).unwrap();
        assert_eq!(out.m, 1.0);
        assert_eq!(out.func, f.func);
    }

    #[test]
    fn generators_shift_the_weight() {
        let (_, geo) = geometry(&pt(2.0, 1.0, false), 20.0, 2001);
        let f = gaussian_bump(&geo.grid, 5.0, 1.0, 0.7).unwrap();
        assert_eq!(apply_generator(Generator::JPlus, &f, 1.5, &geo).unwrap().m, 1.7);
        assert!((apply_generator(Generator::JMinus, &f, 1.5, &geo).unwrap().m + 0.3).abs() < 1e-15);
    }

    #[test]
    fn closure_and_convergence() {
        for params in [pt(2.0, 1.0, false), generic()] {
            let (lo, hi) = if params.is_full_line() {
                (-8.0, 8.0)
            } else {
                (0.0, 16.0)
            };
            let center = if params.is_full_line() { 0.5 } else { 5.0 };
            let map = CoordinateMap::build(&params, 20.0, 4000).unwrap();
            let res = |h: f64| {
                let n = ((hi - lo) / h).round() as usize + 1;
                let grid = RadialGrid::new(lo, hi, n).unwrap();
                let geo = GridGeometry::new(&map, &grid).unwrap();
                let f = gaussian_bump(&grid, center, 1.0, 1.3).unwrap();
                commutator_residuals(&f, 1.5, &geo).unwrap()
            };
            let (a0, a1) = res(0.05);
            assert!(a0 < 1e-12 && a1 < 1e-6, "{a0} {a1}");
            let (_, c1) = res(0.1);
            let order = (c1 / a1).log2();
            assert!(order > 6.0, "observed order {order}");
        }
    }

    #[test]
    fn zero_function_has_zero_residuals() {
        let (_, geo) = geometry(&pt(2.0, 1.0, false), 20.0, 501);
        let f = MSectorFunction::new(RadialFunction::new(geo.grid, vec![0.0; 501]).unwrap(), 1.0);
        assert_eq!(commutator_residuals(&f, 1.5, &geo).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn casimir_routes_agree() {
        for params in [pt(3.0, 1.5, false), generic()] {
            let (_, geo) = geometry(&params, 20.0, 4001);
            let center = if params.is_full_line() { 0.0 } else { 5.0 };
            let f = gaussian_bump(&geo.grid, center, 1.0, 0.9).unwrap();
            let a = apply_casimir(&f, 1.2, &geo, CasimirRoute::Direct).unwrap();
            let b = apply_casimir(&f, 1.2, &geo, CasimirRoute::Composed).unwrap();
            assert!(interior_diff(&a, &b) / a.interior_max() < 1e-6);
        }
    }

    #[test]
    fn casimir_eigenvalues_on_bound_states() {
        for (params, r_max) in [
            (pt(2.0, 1.0, false), 20.0),
            (pt(5.5, 1.0, false), 32.0),
            (generic(), 20.0),
        ] {
            let (map, geo) = geometry(&params, r_max, 6001);
            for st in solve_spectrum(&params).unwrap() {
                let phi = carrier_on_grid(&params, &st, CarrierForm::Hypergeometric, &map, &geo.grid).unwrap();
                let f = MSectorFunction::new(phi, st.m);
                let qf = apply_casimir(&f, st.p, &geo, CasimirRoute::Direct).unwrap();
                let want = MSectorFunction {
                    func: f.func.scaled(st.q),
                    ..qf.clone()
                };
                let err = interior_diff(&qf, &want) / f.interior_max();
                assert!(err < 1e-5, "nu={} err={err}", st.nu);
            }
        }
        // q₀ = 0 for PT (2,1) and 4.8125 for PT (5.5,1)
        let s = solve_spectrum(&pt(5.5, 1.0, false)).unwrap();
        assert!((s[0].q - 4.8125).abs() < 1e-12);
        assert!(solve_spectrum(&pt(2.0, 1.0, false)).unwrap()[0].q.abs() < 1e-12);
    }

    #[test]
    fn ladder_examples() {
        let s = solve_spectrum(&pt(4.0, 2.0, true)).unwrap();
        let (cp, cm) = ladder_coefficients(&s[0]).unwrap();
        assert!((cp + 1.5).abs() < 1e-14);
        assert_eq!(cm, 0.0);
        let s = solve_spectrum(&pt(5.5, 1.0, false)).unwrap();
        let (_, cm) = ladder_coefficients(&s[1]).unwrap();
        assert!((cm + 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ladder_actions_match_closed_form() {
        let params = pt(4.0, 2.0, true);
        let map = CoordinateMap::build(&params, 20.0, 4000).unwrap();
        let grid = default_grid(&map, 4001).unwrap();
        let s = solve_spectrum(&params).unwrap();
        let chk = ladder_check(&s[0], &map, &grid).unwrap();
        assert!(chk.plus_residual < 1e-5, "{chk:?}");
        assert!(chk.minus_residual < 1e-6, "{chk:?}");

        let params = pt(5.5, 1.0, false);
        let map = CoordinateMap::build(&params, 32.0, 4000).unwrap();
        let grid = default_grid(&map, 6001).unwrap();
        for st in solve_spectrum(&params).unwrap() {
            let chk = ladder_check(&st, &map, &grid).unwrap();
            assert!(chk.plus_residual < 1e-5, "{chk:?}");
            assert!(chk.minus_residual < 1e-5, "{chk:?}");
        }
    }

    #[test]
    fn gauge_values() {
        assert_eq!(consistency_gauge(&pt(2.0, 1.0, false), 0.3).unwrap(), 0.25);
        let p = NatanzonParams::new(0.0, 0.0, -1.0, 0.0, 1.0, 1.0);
        assert_eq!(consistency_gauge(&p, 0.5).unwrap(), 0.5);
        assert!(consistency_gauge(&p, 0.0).is_err());
    }

    #[test]
    fn gauge_identity_holds_off_shell() {
        for params in [pt(5.5, 1.0, false), generic()] {
            let (map, geo) = geometry(&params, 20.0, 4001);
            let v = geometry_potential(&map, &geo).unwrap();
            let center = if params.is_full_line() { 0.0 } else { 4.0 };
            let st = solve_spectrum(&params).unwrap()[0];
            let f = gaussian_bump(&geo.grid, center, 1.0, st.m).unwrap();
            let (res, lead) = gauge_identity_residual(&f, &st, &geo, &v).unwrap();
            assert!(res < 1e-6 * lead, "{res} vs {lead}");
        }
    }

    #[test]
    fn pt_specialization() {
        for (a, b) in [(2.0, 1.0), (5.5, 1.0), (4.0, 2.0)] {
            let p = 0.5 * (a + b);
            assert!(pt_specialization_residual(&pt(a, b, false), p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn grid_edge_is_rejected() {
        let (_, geo) = geometry(&pt(2.0, 1.0, false), 20.0, 501);
        let f = MSectorFunction::new(RadialFunction::from_fn(geo.grid, |_| 1.0).unwrap(), 1.0);
        assert!(matches!(
            apply_generator(Generator::JPlus, &f, 1.5, &geo),
            Err(Error::GridEdge { .. })
        ));
    }
}
