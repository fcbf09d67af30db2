//! Special-function kernel: complex log-Gamma and the terminating Gauss
//! hypergeometric series.
//!
//! `ln_gamma` uses the Lanczos approximation (g = 7, nine coefficients) on
//! `Re z >= 1/2` and the reflection formula elsewhere. The hypergeometric
//! series is only ever needed with a non-positive integer first parameter, so
//! it is summed as a polynomial by forward recurrence on the term ratio.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for λ-plane quantities and Gamma arguments.
pub type ComplexValue = Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from a non-positive integer below which Γ is treated as singular.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Complex division that rejects a zero divisor.
pub fn checked_div(num: ComplexValue, den: ComplexValue) -> Result<ComplexValue> {
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

/// Returns `Some(n)` when `z` lies within [`POLE_TOLERANCE`] of the
/// non-positive integer `-n`.
pub fn gamma_pole_index(z: ComplexValue) -> Option<u64> {
    if z.im.abs() > POLE_TOLERANCE || z.re > POLE_TOLERANCE {
        return None;
    }
    let nearest = z.re.round();
    if (z.re - nearest).abs() <= POLE_TOLERANCE && nearest <= 0.0 {
        Some((-nearest) as u64)
    } else {
        None
    }
}

/// `ln sin(πz)`, stable for large `|Im z|`.
fn ln_sin_pi(z: ComplexValue) -> ComplexValue {
    let i = Complex64::i();
    if z.im > 20.0 {
        // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i = e^{-iπz}(e^{2iπz} - 1)/2i
        let e = (2.0 * i * PI * z).exp();
        -i * PI * z + ((e - 1.0) / (2.0 * i)).ln()
    } else if z.im < -20.0 {
        let e = (-2.0 * i * PI * z).exp();
        i * PI * z + ((1.0 - e) / (2.0 * i)).ln()
    } else {
        (PI * z).sin().ln()
    }
}

fn ln_gamma_lanczos(z: ComplexValue) -> ComplexValue {
    let zm1 = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm1 + 0.5) * t.ln() - t + x.ln()
}

/// Complex log-Gamma.
///
/// Errors with [`Error::GammaPole`] when `z` is a non-positive integer within
/// [`POLE_TOLERANCE`].
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            value: f64::NAN,
            domain: "finite complex numbers",
        });
    }
    if gamma_pole_index(z).is_some() {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let one_minus = Complex64::new(1.0, 0.0) - z;
        Ok(PI.ln() - ln_sin_pi(z) - ln_gamma_lanczos(one_minus))
    }
}

/// Γ(z) through `exp(ln_gamma(z))`.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    ln_gamma(z).map(|l| l.exp())
}

/// Terminating Gauss series `₂F₁(-n, b; c; z)` as the exact polynomial
/// `Σ_{k=0}^{n} (-n)_k (b)_k / (c)_k · z^k / k!`.
pub fn gauss_2f1_terminating(n: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain {
            value: z,
            domain: "finite z",
        });
    }
    for k in 0..n {
        if (c + k as f64).abs() < 1e-14 {
            return Err(Error::InvalidDenominator { c, k: k + 1 });
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - nf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Derivative in `z` of the terminating series.
///
/// Uses `d/dz ₂F₁(a,b;c;z) = (ab/c) ₂F₁(a+1,b+1;c+1;z)`.
pub fn gauss_2f1_terminating_dz(n: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let lead = -(n as f64) * b / c;
    if c.abs() < 1e-14 {
        return Err(Error::InvalidDenominator { c, k: 1 });
    }
    Ok(lead * gauss_2f1_terminating(n - 1, b + 1.0, c + 1.0, z)?)
}
