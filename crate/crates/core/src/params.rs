//! Natanzon parameters, the `R(z)` quadratic and pointwise potential
//! evaluation in the `z` variable.
//!
//! Units are ħ = 2m = 1, so the Hamiltonian is `H = -d²/dr² + V(r)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six Natanzon constants. `τ` and `Δ` are always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatanzonParams {
    pub f: f64,
    pub h0: f64,
    pub h1: f64,
    pub a: f64,
    pub c0: f64,
    pub c1: f64,
}

impl NatanzonParams {
    pub fn new(f: f64, h0: f64, h1: f64, a: f64, c0: f64, c1: f64) -> Self {
        Self { f, h0, h1, a, c0, c1 }
    }

    /// τ = c₁ − c₀ − a
    pub fn tau(&self) -> f64 {
        self.c1 - self.c0 - self.a
    }

    /// Δ = τ² − 4ac₀
    pub fn delta_disc(&self) -> f64 {
        let t = self.tau();
        t * t - 4.0 * self.a * self.c0
    }

    /// R(z) = a z² + τ z + c₀
    pub fn r_poly(&self, z: f64) -> f64 {
        (self.a * z + self.tau()) * z + self.c0
    }

    /// R′(z) = 2a z + τ
    pub fn r_poly_dz(&self, z: f64) -> f64 {
        2.0 * self.a * z + self.tau()
    }

    /// Limit of the potential as r → ∞ (z → 1).
    pub fn asymptotic_value(&self) -> f64 {
        (self.h1 + 1.0) / self.c1
    }

    /// Limit of the potential as z → 0 when `c₀ > 0` (left plateau of a
    /// whole-line problem); `None` for half-line maps.
    pub fn left_asymptotic_value(&self) -> Option<f64> {
        (self.c0 > 0.0).then(|| (self.h0 + 1.0) / self.c0)
    }

    /// Whether the coordinate map covers the whole line (`c₀ > 0`) rather than
    /// the half line.
    pub fn is_full_line(&self) -> bool {
        self.c0 > 0.0
    }

    /// Continuum threshold: the lowest asymptotic plateau.
    pub fn continuum_threshold(&self) -> f64 {
        match self.left_asymptotic_value() {
            Some(left) => left.min(self.asymptotic_value()),
            None => self.asymptotic_value(),
        }
    }

    /// Minimum of R on the closed interval [0, 1].
    pub fn r_min_on_unit_interval(&self) -> (f64, f64) {
        let mut best = (0.0, self.r_poly(0.0));
        let r1 = self.r_poly(1.0);
        if r1 < best.1 {
            best = (1.0, r1);
        }
        if self.a != 0.0 {
            let zv = -self.tau() / (2.0 * self.a);
            if zv > 0.0 && zv < 1.0 {
                let rv = self.r_poly(zv);
                if rv < best.1 {
                    best = (zv, rv);
                }
            }
        }
        best
    }

    /// Errors unless the parameter set passes [`validate_params`] geometry.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_params(self);
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidParams(report.messages.join("; ")))
        }
    }
}

/// Returns `(R(z), Δ)`.
pub fn r_poly_eval(params: &NatanzonParams, z: f64) -> (f64, f64) {
    (params.r_poly(z), params.delta_disc())
}

/// Diagnostics for a parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub r_positive: bool,
    pub r_min: f64,
    pub r_min_at: f64,
    pub c1_positive: bool,
    pub asymptotic_value: f64,
    /// Scattering analysis requires `h1 = -1` (zero asymptotic potential).
    pub scattering_ready: bool,
    pub full_line: bool,
    pub messages: Vec<String>,
}

pub fn validate_params(params: &NatanzonParams) -> ValidationReport {
    let mut messages = Vec::new();
    let finite = [params.f, params.h0, params.h1, params.a, params.c0, params.c1]
        .iter()
        .all(|v| v.is_finite());
    if !finite {
        messages.push("non-finite parameter".to_string());
    }
    let (r_min_at, r_min) = params.r_min_on_unit_interval();
    // R may vanish at z = 0 (c0 = 0) but must be positive inside (0, 1).
    let r_positive =
        params.c0 >= 0.0 && params.c1 > 0.0 && (r_min > 0.0 || (r_min_at == 0.0 && r_min == 0.0 && params.tau() > 0.0));
    if !r_positive {
        messages.push(format!("R(z) not positive on (0,1): R({r_min_at}) = {r_min}"));
    }
    let c1_positive = params.c1 > 0.0;
    if !c1_positive {
        messages.push("c1 must be positive".to_string());
    }
    let scattering_ready = params.h1 == -1.0;
    if !scattering_ready {
        messages.push("scattering sector requires h1 = -1".to_string());
    }
    ValidationReport {
        valid: finite && r_positive && c1_positive,
        r_positive,
        r_min,
        r_min_at,
        c1_positive,
        asymptotic_value: params.asymptotic_value(),
        scattering_ready,
        full_line: params.is_full_line(),
        messages,
    }
}

/// Natanzon potential at `z`, with `w = 1 - z` supplied separately so that
/// the tail keeps full relative precision.
pub fn potential_zw(params: &NatanzonParams, z: f64, w: f64) -> Result<f64> {
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
    let NatanzonParams { f, h0, h1, a, c0, c1 } = *params;
    // f z(z-1) + h0 (1-z) + h1 z + 1 == f z² - (h0 - h1 + f) z + h0 + 1
    let first = (-f * z * w + h0 * w + h1 * z + 1.0) / r;
    // [a + (a + (c1-c0)(2z-1)) / (z(z-1)) - 5Δ/(4R)] z²(1-z)²/R², with the
    // 1/(z(z-1)) factor cancelled against z²(1-z)².
    let zw = z * w;
    let r2 = r * r;
    let bracket = a * zw * zw / r2
        - (a + (c1 - c0) * (2.0 * z - 1.0)) * zw / r2
        - 1.25 * params.delta_disc() * zw * zw / (r2 * r);
    Ok(first + bracket)
}

/// Natanzon potential `V(z)` for `0 < z < 1`.
pub fn potential_in_z(params: &NatanzonParams, z: f64) -> Result<f64> {
    potential_zw(params, z, 1.0 - z)
}

/// Pöschl-Teller parameters, `V = -A(A+1) sech²r + B(B-1) csch²r`, optionally
/// shifted by `(A-B)²` so that the continuum starts at `(A-B)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub shifted: bool,
}

impl PtParams {
    pub fn new(a: f64, b: f64, shifted: bool) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams("non-finite Poschl-Teller parameter".into()));
        }
        if a <= b {
            return Err(Error::InvalidParams(format!(
                "Poschl-Teller needs A > B, got A={a}, B={b}"
            )));
        }
        if b < 0.0 {
            return Err(Error::InvalidParams(format!("Poschl-Teller needs B >= 0, got B={b}")));
        }
        Ok(Self { a, b, shifted })
    }

    /// `h₁` of the shifted form, `(-A+B-1)(-A+B+1)`.
    pub fn shifted_h1(a: f64, b: f64) -> f64 {
        (-a + b - 1.0) * (-a + b + 1.0)
    }

    /// Closed-form potential in `r`.
    pub fn potential_in_r(&self, r: f64) -> f64 {
        let sech2 = 1.0 / r.cosh().powi(2);
        let csch2 = 1.0 / r.sinh().powi(2);
        let shift = if self.shifted { (self.a - self.b).powi(2) } else { 0.0 };
        -self.a * (self.a + 1.0) * sech2 + self.b * (self.b - 1.0) * csch2 + shift
    }

    /// Closed-form spectrum; the last entry may sit on the threshold.
    pub fn closed_form_energies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut nu = 0usize;
        loop {
            // δ_ν = A - B - 2ν for B >= 1/2; B(B-1) is symmetric under B -> 1-B
            let d = self.a - self.b.max(1.0 - self.b) - 2.0 * nu as f64;
            if d < -1e-12 {
                break;
            }
            let shift = if self.shifted { (self.a - self.b).powi(2) } else { 0.0 };
            out.push(shift - d * d);
            nu += 1;
        }
        out
    }
}

/// Natanzon constants reproducing a Pöschl-Teller potential with `z = tanh² r`.
pub fn pt_to_natanzon(pt: &PtParams) -> NatanzonParams {
    let (a_, b_) = (pt.a, pt.b);
    let h1 = if pt.shifted { PtParams::shifted_h1(a_, b_) } else { -1.0 };
    NatanzonParams {
        f: (2.0 * a_ - 1.0) * (2.0 * a_ + 3.0) / 4.0,
        h0: (2.0 * b_ + 1.0) * (2.0 * b_ - 3.0) / 4.0,
        h1,
        a: 0.0,
        c0: 0.0,
        c1: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64, shifted: bool) -> NatanzonParams {
        pt_to_natanzon(&PtParams::new(a, b, shifted).unwrap())
    }

    #[test]
    fn r_poly_examples() {
        let p = pt(2.0, 1.0, false);
        for z in [0.1, 0.5, 0.9] {
            let (r, d) = r_poly_eval(&p, z);
            assert_eq!(r, z);
            assert_eq!(d, 1.0);
        }
        let p = NatanzonParams::new(0.0, 0.0, -1.0, 1.0, 1.0, 1.0);
        let (r, d) = r_poly_eval(&p, 0.5);
        assert!((r - 0.75).abs() < 1e-15);
        assert_eq!(d, -3.0);
        let p = NatanzonParams::new(0.0, 0.0, -1.0, 0.0, 1.0, 1.0);
        assert_eq!(r_poly_eval(&p, 0.3), (1.0, 0.0));
    }

    #[test]
    fn validation_examples() {
        let rep = validate_params(&pt(2.0, 1.0, false));
        assert!(rep.valid && rep.scattering_ready);
        assert_eq!(rep.asymptotic_value, 0.0);

        let rep = validate_params(&NatanzonParams::new(0.0, 0.0, -1.0, 1.0, -1.0, 1.0));
        assert!(!rep.valid);
        assert!(!rep.r_positive);
        assert_eq!(rep.r_min_at, 0.0);
        assert_eq!(rep.r_min, -1.0);

        let rep = validate_params(&NatanzonParams::new(0.0, 0.0, 0.0, 1.0, 1.0, 1.0));
        assert!(rep.valid);
        assert!(!rep.scattering_ready);
        assert!(rep.messages.iter().any(|m| m.contains("h1 = -1")));
    }

    #[test]
    fn validation_rejects_interior_zero() {
        // R = 5z² - 5z + 1 dips to -1/4 at z = 1/2
        let p = NatanzonParams::new(0.0, 0.0, -1.0, 5.0, 1.0, 1.0);
        assert!(!validate_params(&p).valid);
    }

    #[test]
    fn pt_potential_matches_closed_form() {
        // sech² r = 1 - z, csch² r = (1 - z)/z
        let v = potential_in_z(&pt(2.0, 1.0, false), 0.5).unwrap();
        assert!((v + 3.0).abs() < 1e-13);
        // A = B = 2 lies outside PtParams but the closed form still applies
        let p = NatanzonParams {
            h0: (2.0 * 2.0 + 1.0) * (2.0 * 2.0 - 3.0) / 4.0,
            ..pt(2.0, 1.0, false)
        };
        let v = potential_in_z(&p, 0.25).unwrap();
        assert!((v - 1.5).abs() < 1e-13);
    }

    #[test]
    fn potential_tends_to_asymptotic_value() {
        let sets = [
            pt(2.0, 1.0, false),
            pt(4.0, 2.0, true),
            NatanzonParams::new(20.0, 2.0, -1.0, 1.0, 1.0, 1.0),
            NatanzonParams::new(3.0, 0.5, 0.7, 0.3, 0.5, 2.0),
        ];
        for p in sets {
            let v = potential_in_z(&p, 1.0 - 1e-4).unwrap();
            assert!(
                (v - p.asymptotic_value()).abs() < 1e-2,
                "{v} vs {}",
                p.asymptotic_value()
            );
            let v = potential_zw(&p, 1.0 - 1e-9, 1e-9).unwrap();
            assert!((v - p.asymptotic_value()).abs() < 1e-6);
        }
    }

    #[test]
    fn domain_errors() {
        let p = pt(2.0, 1.0, false);
        assert!(matches!(potential_in_z(&p, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(potential_in_z(&p, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(potential_in_z(&p, 1.5), Err(Error::Domain { .. })));
        let bad = NatanzonParams::new(0.0, 0.0, -1.0, 5.0, 1.0, 1.0);
        assert!(matches!(
            potential_in_z(&bad, 0.5),
            Err(Error::SingularQuadratic { .. })
        ));
    }

    #[test]
    fn pt_parameter_mapping() {
        let p = pt(2.0, 1.0, false);
        assert_eq!((p.f, p.h0, p.h1), (5.25, -0.75, -1.0));
        assert_eq!((p.a, p.c0, p.c1), (0.0, 0.0, 1.0));
        let p = pt(4.0, 2.0, true);
        assert_eq!((p.f, p.h0, p.h1), (19.25, 1.25, 3.0));
        assert!(PtParams::new(2.0, 2.0, false).is_err());
        assert!(PtParams::new(2.0, -0.5, false).is_err());
    }

    #[test]
    fn json_requires_all_six_keys() {
        let ok: NatanzonParams = serde_json::from_str(r#"{"f":1,"h0":2,"h1":-1,"a":0,"c0":0,"c1":1}"#).unwrap();
        assert_eq!(ok.h0, 2.0);
        assert!(serde_json::from_str::<NatanzonParams>(r#"{"f":1,"h0":2,"h1":-1,"a":0,"c0":0}"#).is_err());
        assert!(
            serde_json::from_str::<NatanzonParams>(r#"{"f":1,"h0":2,"h1":-1,"a":0,"c0":0,"c1":1,"tau":1}"#).is_err()
        );
    }
}
