//! Bound-state spectrum from the quantization condition
//! `α(E) − β(E) − δ(E) = 2ν + 1` with
//! `α² = −aE + f + 1`, `β² = −c₀E + h₀ + 1`, `δ² = −c₁E + h₁ + 1`.
//!
//! All three roots are taken positive. Normalizability requires `β > 0` and
//! `δ ≥ 0`, with `δ = 0` marking a threshold state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::brent;
use crate::params::{potential_zw, NatanzonParams};

const SCAN_POINTS: usize = 4000;
const ROOT_TOL: f64 = 1e-13;
const THRESHOLD_TOL: f64 = 1e-9;

/// A discrete-series state with its exponents and group parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub nu: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub m: f64,
    /// `δ = 0`: the state sits on the continuum threshold.
    #[serde(rename = "threshold_flag")]
    pub threshold: bool,
}

impl BoundState {
    /// Largest violation of the state's defining identities.
    pub fn invariant_residual(&self, params: &NatanzonParams) -> f64 {
        let e = self.energy;
        [
            (2.0 * self.nu as f64 + 1.0 - (self.alpha - self.beta - self.delta)).abs(),
            (self.alpha * self.alpha - (-params.a * e + params.f + 1.0)).abs(),
            (self.beta * self.beta - (-params.c0 * e + params.h0 + 1.0)).abs(),
            (self.delta * self.delta - (-params.c1 * e + params.h1 + 1.0)).abs(),
            (self.p - 0.5 * (self.alpha + self.beta)).abs(),
            (self.m - 0.5 * (self.alpha - self.beta)).abs(),
            (self.q - 0.25 * (self.delta * self.delta - 1.0)).abs(),
            check_j0_consistency(self),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// How [`solve_spectrum_with`] obtains the energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Closed form when `a = c₀ = 0`, root finding otherwise.
    Auto,
    /// Always bracket and root-find.
    RootFind,
}

fn radicand(which: &'static str, value: f64) -> Result<f64> {
    // tolerate rounding just below zero at a threshold
    if value < -1e-12 {
        Err(Error::NegativeRadicand { which, value })
    } else {
        Ok(value.max(0.0).sqrt())
    }
}

/// Exponents and group parameters at energy `E` for level `ν`.
pub fn group_params_of(params: &NatanzonParams, energy: f64, nu: usize) -> Result<BoundState> {
    let alpha = radicand("alpha", -params.a * energy + params.f + 1.0)?;
    let beta = radicand("beta", -params.c0 * energy + params.h0 + 1.0)?;
    let delta = radicand("delta", -params.c1 * energy + params.h1 + 1.0)?;
    Ok(BoundState {
        nu,
        energy,
        alpha,
        beta,
        delta,
        p: 0.5 * (alpha + beta),
        q: 0.25 * (delta * delta - 1.0),
        m: 0.5 * (alpha - beta),
        threshold: delta.abs() < THRESHOLD_TOL,
    })
}

/// `|m − ν − 1/2 − √(q + 1/4)|`
pub fn check_j0_consistency(state: &BoundState) -> f64 {
    (state.m - state.nu as f64 - 0.5 - (state.q + 0.25).max(0.0).sqrt()).abs()
}

pub fn solve_spectrum(params: &NatanzonParams) -> Result<Vec<BoundState>> {
    solve_spectrum_with(params, SolveMethod::Auto)
}

pub fn solve_spectrum_with(params: &NatanzonParams, method: SolveMethod) -> Result<Vec<BoundState>> {
    params.ensure_valid()?;
    let states = if method == SolveMethod::Auto && params.a == 0.0 && params.c0 == 0.0 {
        closed_form(params)?
    } else {
        root_find(params)?
    };
    if states.windows(2).any(|s| s[1].energy <= s[0].energy) {
        return Err(Error::InvalidParams("energies do not increase with nu".into()));
    }
    Ok(states)
}

/// `α`, `β` constant: `δ = α − β − (2ν+1)`, `E = (h₁ + 1 − δ²)/c₁`.
fn closed_form(params: &NatanzonParams) -> Result<Vec<BoundState>> {
    let alpha = radicand("alpha", params.f + 1.0)?;
    let beta = radicand("beta", params.h0 + 1.0)?;
    let mut out = Vec::new();
    for nu in 0.. {
        let delta = alpha - beta - (2 * nu + 1) as f64;
        if delta < -THRESHOLD_TOL {
            break;
        }
        let delta = delta.max(0.0);
        let energy = (params.h1 + 1.0 - delta * delta) / params.c1;
        let mut s = group_params_of(params, energy, nu)?;
        s.delta = delta;
        s.q = 0.25 * (delta * delta - 1.0);
        s.threshold = delta < THRESHOLD_TOL;
        out.push(s);
    }
    Ok(out)
}

/// Upper end of the physical window: where δ (or β, on the whole line)
/// vanishes, or where α's radicand would turn negative.
fn upper_energy(params: &NatanzonParams) -> f64 {
    let mut e_up = params.asymptotic_value();
    if params.c0 > 0.0 {
        e_up = e_up.min((params.h0 + 1.0) / params.c0);
    }
    if params.a > 0.0 {
        e_up = e_up.min((params.f + 1.0) / params.a);
    }
    e_up
}

/// Minimum of the potential over a logit-spaced scan of `(0, 1)`.
pub fn potential_minimum(params: &NatanzonParams) -> f64 {
    let n = 20_000;
    let mut v_min = f64::INFINITY;
    for i in 0..=n {
        let y = -40.0 + 80.0 * i as f64 / n as f64;
        let e = (-y.abs()).exp();
        let (z, w) = if y >= 0.0 {
            (1.0 / (1.0 + e), e / (1.0 + e))
        } else {
            (e / (1.0 + e), 1.0 / (1.0 + e))
        };
        if let Ok(v) = potential_zw(params, z, w) {
            v_min = v_min.min(v);
        }
    }
    v_min
}

fn root_find(params: &NatanzonParams) -> Result<Vec<BoundState>> {
    let e_up = upper_energy(params);
    let mut e_lo = potential_minimum(params).min(e_up) - 1.0;
    if params.a < 0.0 {
        e_lo = e_lo.max((params.f + 1.0) / params.a);
    }
    if !(e_lo < e_up) {
        return Ok(Vec::new());
    }
    // G(E) = α − β − δ; radicands are clamped at zero at the window edges
    let g = |e: f64| -> f64 {
        let ra = -params.a * e + params.f + 1.0;
        let rb = -params.c0 * e + params.h0 + 1.0;
        let rd = -params.c1 * e + params.h1 + 1.0;
        ra.max(0.0).sqrt() - rb.max(0.0).sqrt() - rd.max(0.0).sqrt()
    };
    // quadratic clustering towards the threshold, where levels accumulate
    let energies: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| {
            let t = 1.0 - i as f64 / SCAN_POINTS as f64;
            e_up - (e_up - e_lo) * t * t
        })
        .collect();
    let values: Vec<f64> = energies.iter().map(|&e| g(e)).collect();
    let g_up = g(e_up);

    let mut out = Vec::new();
    for nu in 0.. {
        let level = (2 * nu + 1) as f64;
        let mut brackets = Vec::new();
        for i in 0..SCAN_POINTS {
            let (a, b) = (values[i] - level, values[i + 1] - level);
            // the threshold endpoint is handled separately
            if i + 1 == SCAN_POINTS && b.abs() < THRESHOLD_TOL {
                continue;
            }
            if a == 0.0 || a.signum() != b.signum() {
                brackets.push((energies[i], energies[i + 1]));
            }
        }
        let at_threshold = (g_up - level).abs() < THRESHOLD_TOL;
        let roots = brackets.len() + usize::from(at_threshold);
        if roots > 1 {
            return Err(Error::BranchAmbiguity { nu, roots });
        }
        let energy = match (brackets.first(), at_threshold) {
            (Some(&(a, b)), _) => brent(|e| g(e) - level, a, b, ROOT_TOL)?,
            (None, true) => e_up,
            (None, false) => break,
        };
        let mut s = group_params_of(params, energy, nu)?;
        if !(s.beta > 0.0) {
            break;
        }
        if at_threshold && brackets.is_empty() {
            s.threshold = true;
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{pt_to_natanzon, PtParams};
    use proptest::prelude::*;

    fn pt(a: f64, b: f64, shifted: bool) -> NatanzonParams {
        pt_to_natanzon(&PtParams::new(a, b, shifted).unwrap())
    }

    fn energies(p: &NatanzonParams, method: SolveMethod) -> Vec<f64> {
        solve_spectrum_with(p, method)
            .unwrap()
            .iter()
            .map(|s| s.energy)
            .collect()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn pt_spectra() {
        for method in [SolveMethod::Auto, SolveMethod::RootFind] {
            assert_close(&energies(&pt(5.5, 1.0, false), method), &[-20.25, -6.25, -0.25], 1e-10);
            assert_close(&energies(&pt(2.0, 1.0, false), method), &[-1.0], 1e-10);
            assert_close(&energies(&pt(4.5, 1.0, false), method), &[-12.25, -2.25], 1e-10);
            assert_close(&energies(&pt(4.0, 2.0, true), method), &[0.0, 4.0], 1e-10);
        }
    }

    #[test]
    fn shifted_threshold_state_is_flagged() {
        for method in [SolveMethod::Auto, SolveMethod::RootFind] {
            let s = solve_spectrum_with(&pt(4.0, 2.0, true), method).unwrap();
            assert!(!s[0].threshold);
            assert!(s[1].threshold);
            assert_eq!(s[1].delta, 0.0);
        }
    }

    #[test]
    fn group_parameter_examples() {
        let s = group_params_of(&pt(2.0, 1.0, false), -1.0, 0).unwrap();
        assert!((s.p - 1.5).abs() < 1e-14);
        assert!((s.m - 1.0).abs() < 1e-14);
        assert!(s.q.abs() < 1e-14);

        let s = group_params_of(&pt(5.5, 1.0, false), -20.25, 0).unwrap();
        assert!((s.alpha - 6.0).abs() < 1e-14);
        assert!((s.beta - 0.5).abs() < 1e-14);
        assert!((s.delta - 4.5).abs() < 1e-14);
        assert!((s.alpha - s.beta - s.delta - 1.0).abs() < 1e-14);

        // δ² = -E - 1 + 1 < 0 above the plateau
        assert!(matches!(
            group_params_of(&pt(2.0, 1.0, false), 1.0, 0),
            Err(Error::NegativeRadicand { which: "delta", .. })
        ));
    }

    #[test]
    fn j0_consistency() {
        let s = solve_spectrum(&pt(2.0, 1.0, false)).unwrap()[0];
        assert!(check_j0_consistency(&s) < 1e-12);
        let s = solve_spectrum(&pt(5.5, 1.0, false)).unwrap()[1];
        assert!(check_j0_consistency(&s) < 1e-12);
        let mut bad = s;
        bad.m += 0.1;
        assert!((check_j0_consistency(&bad) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn generic_set_has_a_ground_state() {
        let p = NatanzonParams::new(20.0, 2.0, -1.0, 1.0, 1.0, 1.0);
        let s = solve_spectrum(&p).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].energy < 0.0);
        assert!(s[0].invariant_residual(&p) < 1e-10);
    }

    #[test]
    fn no_bound_states_is_empty() {
        // α − β = A + B = 0.5 < 1: no level fits
        let p = pt(0.3, 0.2, false);
        assert!(solve_spectrum(&p).unwrap().is_empty());
        assert!(solve_spectrum_with(&p, SolveMethod::RootFind).unwrap().is_empty());
    }

    #[test]
    fn json_field_names() {
        let s = solve_spectrum(&pt(2.0, 1.0, false)).unwrap();
        let v = serde_json::to_value(s).unwrap();
        let keys: Vec<_> = v[0].as_object().unwrap().keys().cloned().collect();
        for k in ["nu", "E", "alpha", "beta", "delta", "p", "q", "m", "threshold_flag"] {
            assert!(keys.iter().any(|x| x == k), "{k}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn pt_matches_closed_form(b in 0.0f64..3.0, gap in 0.5f64..8.0, shifted: bool) {
            let ptp = PtParams::new(b + gap, b, shifted).unwrap();
            let p = pt_to_natanzon(&ptp);
            let want = ptp.closed_form_energies();
            for method in [SolveMethod::Auto, SolveMethod::RootFind] {
                let got = solve_spectrum_with(&p, method).unwrap();
                prop_assert_eq!(got.len(), want.len());
                for (s, w) in got.iter().zip(&want) {
                    prop_assert!((s.energy - w).abs() < 1e-10, "{} vs {}", s.energy, w);
                    prop_assert!(s.invariant_residual(&p) < 1e-10);
                }
                prop_assert!(got.windows(2).all(|s| s[1].energy > s[0].energy));
            }
        }
    }
}
