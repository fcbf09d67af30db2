//! Continuous-series sector: asymptotic generators, Jost-coefficient
//! recursion, the reflection coefficient `R_m = A_m/B_m` and its bound-state
//! poles in the complex λ plane.
//!
//! The asymptotic state is `A_m e^{i(λr/√c₁ + mφ)} + B_m e^{i(−λr/√c₁ + mφ)}`
//! with `j = −1/2 + iλ/2`. Only λ enters `R_m`; `c₁` rescales `r`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{casimir_coefficients, generator_coefficients};
use crate::coordmap::CoordinateMap;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::params::NatanzonParams;
use crate::specfun::{gamma_pole_index, ln_gamma};
use crate::spectrum::BoundState;

/// `|N|` below which a Jost step is a breakdown.
pub const BREAKDOWN_TOL: f64 = 1e-14;
/// `|R|` on the confirmation contour above which a pole is confirmed.
pub const POLE_CONFIRM_MAGNITUDE: f64 = 1e8;
const CONTOUR_RADII: [f64; 3] = [1e-6, 1e-8, 1e-10];
const CONTOUR_POINTS: usize = 8;
const INTEGER_TOL: f64 = 1e-12;
const MAX_CANDIDATES: usize = 100_000;

/// A continuous-series channel: wavenumber parameter λ, base weight `m₀`,
/// scale `c₁` and the undetermined ratio `A₀/B₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterChannel {
    pub lambda: Complex64,
    pub m0: f64,
    pub c1: f64,
    pub ratio0: Complex64,
}

impl ScatterChannel {
    pub fn new(lambda: Complex64, m0: f64, c1: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(Error::InvalidParams(format!("scattering needs c1 > 0, got {c1}")));
        }
        if !(lambda.re.is_finite() && lambda.im.is_finite() && m0.is_finite()) {
            return Err(Error::InvalidParams("non-finite channel parameter".into()));
        }
        Ok(Self {
            lambda,
            m0,
            c1,
            ratio0: Complex64::new(1.0, 0.0),
        })
    }

    /// Channel for the physical momentum `k`, where the plane wave is `e^{ikr}`.
    pub fn from_momentum(k: f64, m0: f64, c1: f64) -> Result<Self> {
        Self::new(Complex64::new(k * c1.sqrt(), 0.0), m0, c1)
    }

    pub fn with_lambda(self, lambda: Complex64) -> Self {
        Self { lambda, ..self }
    }

    pub fn with_ratio0(self, ratio0: Complex64) -> Self {
        Self { ratio0, ..self }
    }

    /// `j = −1/2 + iλ/2`
    pub fn j(&self) -> Complex64 {
        Complex64::new(-0.5, 0.0) + Complex64::i() * self.lambda * 0.5
    }

    /// `j(j+1)`, equal to `−(1+λ²)/4`.
    pub fn casimir(&self) -> Complex64 {
        let j = self.j();
        j * (j + 1.0)
    }

    /// Physical momentum `λ/√c₁`.
    pub fn momentum(&self) -> Complex64 {
        self.lambda / self.c1.sqrt()
    }
}

fn nearest_integer(m: f64) -> Option<i64> {
    let n = m.round();
    ((m - n).abs() <= INTEGER_TOL).then_some(n as i64)
}

/// The four Gamma arguments `(−iλ/2+m+½, iλ/2+½, iλ/2+m+½, −iλ/2+½)`:
/// numerator pair first.
fn gamma_arguments(lambda: Complex64, m: f64) -> [Complex64; 4] {
    let half_il = Complex64::i() * lambda * 0.5;
    [-half_il + m + 0.5, half_il + 0.5, half_il + m + 0.5, -half_il + 0.5]
}

/// `R_m/ratio₀` for integer `m` as the Pochhammer ratio `(d)_m/(n)_m` with
/// `n = iλ/2+½`, `d = −iλ/2+½`. Pole/zero cancellations are exact here.
fn pochhammer_ratio(lambda: Complex64, m: i64) -> Result<Complex64> {
    let [_, n, _, d] = gamma_arguments(lambda, 0.0);
    let mut acc = Complex64::new(1.0, 0.0);
    let steps: Vec<f64> = if m >= 0 {
        (0..m).map(|k| k as f64).collect()
    } else {
        (1..=-m).map(|k| -(k as f64)).collect()
    };
    for k in steps {
        let (num, den) = if m >= 0 { (d + k, n + k) } else { (n + k, d + k) };
        if den.norm() <= crate::specfun::POLE_TOLERANCE {
            // m > 0: Γ(iλ/2+½) pole; m < 0: Γ(−iλ/2+m+½) pole
            let arg = if m >= 0 { n } else { d + m as f64 };
            return Err(Error::GammaPole { re: arg.re, im: arg.im });
        }
        acc *= num / den;
    }
    Ok(acc)
}

/// `R_m = ratio₀ · Γ(−iλ/2+m+½)Γ(iλ/2+½) / [Γ(iλ/2+m+½)Γ(−iλ/2+½)]`.
///
/// Errors with [`Error::GammaPole`] when a numerator Gamma is singular and not
/// cancelled; a lone denominator pole gives `R = 0`.
pub fn reflection_coefficient(channel: &ScatterChannel, m: f64) -> Result<Complex64> {
    if !m.is_finite() {
        return Err(Error::Domain {
            value: m,
            domain: "finite weights m",
        });
    }
    let args = gamma_arguments(channel.lambda, m);
    let poles: Vec<bool> = args.iter().map(|a| gamma_pole_index(*a).is_some()).collect();
    if poles.iter().any(|p| *p) {
        if let Some(mi) = nearest_integer(m) {
            return Ok(channel.ratio0 * pochhammer_ratio(channel.lambda, mi)?);
        }
        if let Some(i) = (0..2).find(|&i| poles[i]) {
            return Err(Error::GammaPole {
                re: args[i].re,
                im: args[i].im,
            });
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln = ln_gamma(args[0])? + ln_gamma(args[1])? - ln_gamma(args[2])? - ln_gamma(args[3])?;
    Ok(channel.ratio0 * ln.exp())
}

/// Jost coefficients at weight `m = m₀ + σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostStep {
    pub sigma: i64,
    pub m: f64,
    pub a: Complex64,
    pub b: Complex64,
}

impl JostStep {
    pub fn ratio(&self) -> Complex64 {
        self.a / self.b
    }
}

/// Steps `(A, B)` from `m₀` by `|n_steps|` weights, upward for positive
/// `n_steps` (through `J₊^∞`) and downward otherwise (through `J₋^∞`).
///
/// Upward: `A_{m+1} = A_m (m+½−iλ/2)/N`, `B_{m+1} = B_m (m+½+iλ/2)/N` with
/// `N = √((m−j)(m+j+1))`. Downward uses `N = √((m+j)(m−j−1))`.
pub fn jost_recursion(channel: &ScatterChannel, n_steps: i64) -> Result<Vec<JostStep>> {
    let j = channel.j();
    let half_il = Complex64::i() * channel.lambda * 0.5;
    let mut cur = JostStep {
        sigma: 0,
        m: channel.m0,
        a: channel.ratio0,
        b: Complex64::new(1.0, 0.0),
    };
    let mut out = vec![cur];
    let dir = n_steps.signum();
    for _ in 0..n_steps.unsigned_abs() {
        let m = cur.m;
        let (norm_sq, fa, fb) = if dir > 0 {
            ((m - j) * (m + j + 1.0), -half_il + m + 0.5, half_il + m + 0.5)
        } else {
            ((m + j) * (m - j - 1.0), half_il + m - 0.5, -half_il + m - 0.5)
        };
        let n = norm_sq.sqrt();
        if n.norm() < BREAKDOWN_TOL {
            return Err(Error::RecursionBreakdown { m });
        }
        cur = JostStep {
            sigma: cur.sigma + dir,
            m: m + dir as f64,
            a: cur.a * fa / n,
            b: cur.b * fb / n,
        };
        out.push(cur);
    }
    Ok(out)
}

/// Rectangle `[re_lo, re_hi] × [im_lo, im_hi]` in the λ plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl SearchBox {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Result<Self> {
        if !(re_lo <= re_hi && im_lo <= im_hi) || ![re_lo, re_hi, im_lo, im_hi].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParams("search box needs finite lo <= hi edges".into()));
        }
        Ok(Self {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        })
    }

    fn contains(&self, z: Complex64) -> bool {
        (self.re_lo..=self.re_hi).contains(&z.re) && (self.im_lo..=self.im_hi).contains(&z.im)
    }
}

/// A located pole of `R_m`.
#[derive(Debug, Clone, Serialize)]
pub struct Pole {
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `−|λ|²/c₁`; `None` off the bound-state half-plane.
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub matched_nu: Option<usize>,
    /// Lattice index `n` of the singular numerator argument `−n`.
    pub lattice_index: u64,
    /// `|R|` exceeded the confirmation magnitude on the smallest contour.
    pub confirmed: bool,
    /// Distance between the lattice point and the secant-refined zero of `1/R`.
    pub localization: f64,
}

/// A numerator pole removed by a coincident denominator pole.
#[derive(Debug, Clone, Serialize)]
pub struct CancelledCandidate {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub lattice_index: u64,
    /// Largest `|R|` on the confirmation contour; finite for a true cancellation.
    pub contour_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleReport {
    pub m: f64,
    pub c1: f64,
    pub integer_m: bool,
    pub note: Option<String>,
    /// Surviving poles on the positive imaginary axis.
    pub poles: Vec<Pole>,
    /// Surviving poles elsewhere; not bound states.
    pub other_poles: Vec<Pole>,
    pub cancelled: Vec<CancelledCandidate>,
}

impl PoleReport {
    pub fn energies(&self) -> Vec<f64> {
        self.poles.iter().filter_map(|p| p.energy).collect()
    }

    /// Tags each bound pole with the level whose energy agrees within
    /// `tol·max(1, |E|)`.
    pub fn match_spectrum(&mut self, states: &[BoundState], tol: f64) {
        for pole in &mut self.poles {
            if let Some(e) = pole.energy {
                pole.matched_nu = states
                    .iter()
                    .find(|s| (s.energy - e).abs() <= tol * e.abs().max(1.0))
                    .map(|s| s.nu);
            }
        }
    }

    pub fn all_matched(&self) -> bool {
        self.poles.iter().all(|p| p.matched_nu.is_some())
    }
}

fn contour_magnitudes(channel: &ScatterChannel, m: f64, center: Complex64, radius: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for k in 0..CONTOUR_POINTS {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / CONTOUR_POINTS as f64;
        let lam = center + Complex64::from_polar(radius, theta);
        let mag = reflection_coefficient(&channel.with_lambda(lam), m).map_or(f64::INFINITY, |r| r.norm());
        lo = lo.min(mag);
        hi = hi.max(mag);
    }
    (lo, hi)
}

/// Secant iteration on `1/R` from two points near `start`.
fn refine_pole(channel: &ScatterChannel, m: f64, start: Complex64) -> Complex64 {
    let inv = |lam: Complex64| -> Option<Complex64> {
        reflection_coefficient(&channel.with_lambda(lam), m)
            .ok()
            .map(|r| 1.0 / r)
    };
    let scale = start.norm().max(1.0);
    let mut x0 = start + Complex64::new(1e-4, 1e-4) * scale;
    let mut x1 = start + Complex64::new(-1e-4, 2e-4) * scale;
    let (mut f0, mut f1) = match (inv(x0), inv(x1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return start,
    };
    for _ in 0..60 {
        let den = f1 - f0;
        if den.norm() == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / den;
        if (x2 - x1).norm() <= 1e-15 * scale {
            return x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = match inv(x1) {
            Some(v) => v,
            // landed on the pole within the Gamma tolerance
            None => return x1,
        };
    }
    x1
}

/// Poles of `R_m(λ)` inside `search_box`.
///
/// Candidates come from the numerator lattices `Γ(iλ/2+½)`: `λ = i(2n+1)` and
/// `Γ(−iλ/2+m+½)`: `λ = −i(2n+2m+1)`. A candidate is cancelled when a
/// denominator argument is also a non-positive integer there. Survivors are
/// confirmed by the growth of `|R|` on shrinking contours and localized by a
/// secant iteration on `1/R`.
pub fn find_bound_poles(template: &ScatterChannel, m: f64, search_box: &SearchBox) -> Result<PoleReport> {
    if !m.is_finite() {
        return Err(Error::Domain {
            value: m,
            domain: "finite weights m",
        });
    }
    let integer_m = nearest_integer(m).is_some();
    let mut report = PoleReport {
        m,
        c1: template.c1,
        integer_m,
        note: (!integer_m).then(|| {
            "non-integer m: candidate lattices of both numerator Gammas are listed; \
             correspondence outside the worked regime"
                .to_string()
        }),
        poles: Vec::new(),
        other_poles: Vec::new(),
        cancelled: Vec::new(),
    };
    if !(search_box.re_lo <= 0.0 && 0.0 <= search_box.re_hi) {
        return Ok(report);
    }
    let mut candidates: Vec<(Complex64, u64)> = Vec::new();
    for n in 0..MAX_CANDIDATES as u64 {
        let im = 2.0 * n as f64 + 1.0;
        if im > search_box.im_hi {
            break;
        }
        candidates.push((Complex64::new(0.0, im), n));
    }
    for n in 0..MAX_CANDIDATES as u64 {
        let im = -(2.0 * n as f64 + 2.0 * m + 1.0);
        if im < search_box.im_lo {
            break;
        }
        candidates.push((Complex64::new(0.0, im), n));
    }
    for (lam, n) in candidates {
        if !search_box.contains(lam) {
            continue;
        }
        let args = gamma_arguments(lam, m);
        let smallest = CONTOUR_RADII[CONTOUR_RADII.len() - 1];
        if gamma_pole_index(args[2]).is_some() || gamma_pole_index(args[3]).is_some() {
            let (_, hi) = contour_magnitudes(template, m, lam, smallest);
            report.cancelled.push(CancelledCandidate {
                lambda_re: lam.re,
                lambda_im: lam.im,
                lattice_index: n,
                contour_max: hi,
            });
            continue;
        }
        let lows: Vec<f64> = CONTOUR_RADII
            .iter()
            .map(|r| contour_magnitudes(template, m, lam, *r).0)
            .collect();
        let growing = lows.windows(2).all(|w| w[1] > 10.0 * w[0]);
        let confirmed = growing && lows[lows.len() - 1] > POLE_CONFIRM_MAGNITUDE;
        let refined = refine_pole(template, m, lam);
        let bound = lam.im > 0.0;
        let pole = Pole {
            lambda_re: lam.re,
            lambda_im: lam.im,
            energy: bound.then(|| -lam.norm_sqr() / template.c1),
            matched_nu: None,
            lattice_index: n,
            confirmed,
            localization: (refined - lam).norm(),
        };
        if bound {
            report.poles.push(pole);
        } else {
            report.other_poles.push(pole);
        }
    }
    let by_im = |a: &Pole, b: &Pole| a.lambda_im.total_cmp(&b.lambda_im);
    report.poles.sort_by(by_im);
    report.other_poles.sort_by(by_im);
    Ok(report)
}

/// Writes `lambda,re_R,im_R,abs_R` for real λ values.
pub fn write_reflection_csv<W: Write>(template: &ScatterChannel, m: f64, lambdas: &[f64], mut out: W) -> Result<()> {
    writeln!(out, "lambda,re_R,im_R,abs_R")?;
    for &l in lambdas {
        let r = reflection_coefficient(&template.with_lambda(Complex64::new(l, 0.0)), m)?;
        writeln!(
            out,
            "{},{},{},{}",
            crate::report::fmt_num(l),
            crate::report::fmt_num(r.re),
            crate::report::fmt_num(r.im),
            crate::report::fmt_num(r.norm())
        )?;
    }
    Ok(())
}

/// Large-`r` limits of the generators, Casimir and potential.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub r: f64,
    pub p_values: Vec<f64>,
    /// Largest deviation of `J±` coefficients from `(∓√c₁/2, 1, ±½)` over `p_values`.
    pub generator_deviation: f64,
    /// Largest deviation of the Casimir coefficients from `(c₁/4, 0, 0, −¼)`.
    pub casimir_deviation: f64,
    /// `|V(r) − (h₁+1)/c₁|`
    pub potential_deviation: f64,
    /// Relative error of `Q^∞ e^{ikr} = (−c₁k² − 1)/4 · e^{ikr}` by finite differences.
    pub plane_wave_deviation: f64,
    /// `h₁ = −1`, required for the scattering sector.
    pub scattering_sector: bool,
}

impl AsymptoticReport {
    pub fn passes(&self, coeff_tol: f64, potential_tol: f64) -> bool {
        self.generator_deviation < coeff_tol
            && self.casimir_deviation < coeff_tol
            && self.potential_deviation < potential_tol
            && self.plane_wave_deviation < coeff_tol
    }
}

/// Evaluates the asymptotic limits at `r` (clamped to the map's range).
pub fn asymptotic_checks(params: &NatanzonParams, map: &CoordinateMap, r: f64) -> Result<AsymptoticReport> {
    params.ensure_valid()?;
    let r = r.min(map.range().1);
    let (z, w) = map.zw_of_r(r)?;
    let half = 0.5 * params.c1.sqrt();
    let p_values = vec![0.5, 1.5, 3.0];
    let mut gen_dev: f64 = 0.0;
    let mut cas_dev: f64 = 0.0;
    for &p in &p_values {
        for sign in [1.0, -1.0] {
            let g = generator_coefficients(params, z, w, p, sign)?;
            gen_dev = gen_dev
                .max((g.d_r + sign * half).abs())
                .max((g.m_coeff - 1.0).abs())
                .max((g.constant - sign * 0.5).abs());
        }
        let q = casimir_coefficients(params, z, w, p)?;
        cas_dev = cas_dev
            .max((q.d2 - params.c1 / 4.0).abs())
            .max(q.m2.abs())
            .max(q.pm.abs())
            .max((q.rest + 0.25).abs());
    }
    let v_inf = params.asymptotic_value();
    let potential_deviation = (map.potential_at(r)? - v_inf).abs();
    Ok(AsymptoticReport {
        r,
        p_values,
        generator_deviation: gen_dev,
        casimir_deviation: cas_dev,
        potential_deviation,
        plane_wave_deviation: plane_wave_check(params.c1, 1.3)?,
        scattering_sector: params.h1 == -1.0,
    })
}

/// Applies `Q^∞ = (c₁∂² − 1)/4` to `e^{ikr}` by eighth-order differences and
/// returns the relative error against `(−c₁k² − 1)/4`.
fn plane_wave_check(c1: f64, k: f64) -> Result<f64> {
    let grid = RadialGrid::new(0.0, 10.0, 2001)?;
    let rs = grid.points();
    let re: Vec<f64> = rs.iter().map(|r| (k * r).cos()).collect();
    let im: Vec<f64> = rs.iter().map(|r| (k * r).sin()).collect();
    let diff = grid.diff();
    let (d2re, d2im) = (diff.d2(&re), diff.d2(&im));
    let want = (-c1 * k * k - 1.0) / 4.0;
    let edge = diff.half_width();
    let worst = (edge..rs.len() - edge)
        .map(|i| {
            let q = Complex64::new(c1 * d2re[i] - re[i], c1 * d2im[i] - im[i]) / 4.0;
            (q - Complex64::new(re[i], im[i]) * want).norm()
        })
        .fold(0.0, f64::max);
    Ok(worst / want.abs())
}

/// `A/B` step factor `R_{m+1}/R_m` read off the actual `J₊` coefficients at
/// `r`, acting on the two plane waves `e^{±iλr/√c₁}`.
pub fn asymptotic_step_ratio(
    params: &NatanzonParams,
    map: &CoordinateMap,
    lambda: f64,
    m: f64,
    p: f64,
    r: f64,
) -> Result<Complex64> {
    let (z, w) = map.zw_of_r(r.min(map.range().1))?;
    let g = generator_coefficients(params, z, w, p, 1.0)?;
    let ik = Complex64::new(0.0, lambda / params.c1.sqrt());
    let base = Complex64::new(m * g.m_coeff + g.constant, 0.0);
    Ok((base + g.d_r * ik) / (base - g.d_r * ik))
}
