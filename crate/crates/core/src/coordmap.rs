//! The coordinate map `z(r)` solving `dz/dr = 2z(1-z)/√R(z)`.
//!
//! The map is tabulated in the logit variable `y = ln(z/(1-z))`, where the
//! inverse ODE `dr/dy = √R(z(y))/2` has a smooth, bounded right side. Nodes are
//! uniform in `y`, which is geometric in `r` near a half-line origin and
//! uniform in the tail. Between nodes `r(y)` is recovered from the exact local
//! integral, and `z(r)` by Newton iteration on it.
//!
//! For `c₀ = 0` the map covers the half line with `z(0) = 0`; it is seeded
//! from the small-`z` series of `r(z)`. For `c₀ > 0`, `z → 0` only as
//! `r → -∞`, so the map covers `[-r_max, r_max]` anchored at `z(0) = 1/2`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, UniformDiff};
use crate::params::{potential_zw, NatanzonParams};

/// Default outer radius of tabulated maps.
pub const DEFAULT_R_MAX: f64 = 20.0;
/// Default number of table nodes.
pub const DEFAULT_POINTS: usize = 4000;

const SEED_Z: f64 = 1e-8;
const SERIES_TERMS: usize = 8;
const GL_ORDER: usize = 12;
const MAX_PANEL: f64 = 0.25;

/// A point on the map with the derivatives the algebra needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub r: f64,
    pub z: f64,
    /// `1 - z`, kept separately for precision in the tail.
    pub w: f64,
    pub dz: f64,
    pub d2z: f64,
    pub d3z: f64,
}

/// Analytic `z′`, `z″`, `z‴` from `z` (and `w = 1-z`) by the chain rule on
/// the ODE's right side.
pub fn derivatives_at(params: &NatanzonParams, z: f64, w: f64) -> Result<(f64, f64, f64)> {
    let r = params.r_poly(z);
    if r <= 0.0 {
        return Err(Error::SingularQuadratic { z, value: r });
    }
    let rp = params.r_poly_dz(z);
    let rpp = 2.0 * params.a;
    let sq = r.sqrt();
    let zw = z * w;
    let s = 2.0 * zw / sq;
    let s1 = 2.0 * (w - z) / sq - zw * rp / (r * sq);
    let s2 = -4.0 / sq - 2.0 * (w - z) * rp / (r * sq) - zw * rpp / (r * sq) + 1.5 * zw * rp * rp / (r * r * sq);
    Ok((s, s * s1, s * (s1 * s1 + s * s2)))
}

#[derive(Debug, Clone)]
enum Origin {
    /// `c₀ = 0`: `r(z) = √τ Σ c_k z^{k+1/2}/(2k+1)` near zero.
    HalfLine {
        sqrt_tau: f64,
        coef: [f64; SERIES_TERMS],
    },
    FullLine,
}

/// Tabulated monotone map between `r` and `z`.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    params: NatanzonParams,
    y_grid: Vec<f64>,
    r_grid: Vec<f64>,
    r_lo: f64,
    r_hi: f64,
    origin: Origin,
    gl: (Vec<f64>, Vec<f64>),
}

fn logistic(y: f64) -> (f64, f64) {
    // (z, 1 - z)
    if y >= 0.0 {
        let e = (-y).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = y.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

fn logit(z: f64) -> f64 {
    (z / (1.0 - z)).ln()
}

impl CoordinateMap {
    /// Build with the default window and resolution.
    pub fn with_defaults(params: &NatanzonParams) -> Result<Self> {
        Self::build(params, DEFAULT_R_MAX, DEFAULT_POINTS)
    }

    pub fn build(params: &NatanzonParams, r_max: f64, n_points: usize) -> Result<Self> {
        params.ensure_valid()?;
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidParams(format!("r_max must be positive, got {r_max}")));
        }
        if n_points < 100 {
            return Err(Error::InvalidParams(format!("n_points must be >= 100, got {n_points}")));
        }
        let origin = if params.c0 == 0.0 {
            let tau = params.tau();
            if tau <= 0.0 {
                return Err(Error::Integration(format!(
                    "half-line map needs tau > 0 when c0 = 0, got {tau}"
                )));
            }
            let eps = params.a / tau;
            // √(1+εt)/(1-t) = Σ c_k t^k: partial sums of the binomial series
            let mut coef = [0.0; SERIES_TERMS];
            let mut binom = 1.0;
            let mut acc = 0.0;
            for (k, c) in coef.iter_mut().enumerate() {
                if k > 0 {
                    binom *= (0.5 - (k - 1) as f64) / k as f64 * eps;
                }
                acc += binom;
                *c = acc;
            }
            Origin::HalfLine {
                sqrt_tau: tau.sqrt(),
                coef,
            }
        } else {
            Origin::FullLine
        };
        let mut map = Self {
            params: *params,
            y_grid: Vec::new(),
            r_grid: Vec::new(),
            r_lo: 0.0,
            r_hi: r_max,
            origin,
            gl: gauss_legendre(GL_ORDER),
        };

        let (y_start, r_start) = match map.origin {
            Origin::HalfLine { .. } => (logit(SEED_Z), map.series_r(SEED_Z)),
            Origin::FullLine => (0.0, 0.0),
        };
        // march outwards to find the y-window covering [r_lo, r_hi]
        let step = 0.05;
        let y_hi = map.march(y_start, r_start, step, r_max)?;
        let y_lo = match map.origin {
            Origin::HalfLine { .. } => y_start,
            Origin::FullLine => {
                map.r_lo = -r_max;
                map.march(y_start, r_start, -step, -r_max)?
            }
        };

        let dy = (y_hi - y_lo) / (n_points - 1) as f64;
        let y_grid: Vec<f64> = (0..n_points).map(|i| y_lo + i as f64 * dy).collect();
        let anchor_idx = match map.origin {
            Origin::HalfLine { .. } => 0,
            Origin::FullLine => ((0.0 - y_lo) / dy).round() as usize,
        };
        let y_anchor = match map.origin {
            Origin::HalfLine { .. } => y_start,
            Origin::FullLine => 0.0,
        };
        let mut r_grid = vec![0.0; n_points];
        r_grid[anchor_idx] = r_start + map.integrate(y_anchor, y_grid[anchor_idx])?;
        for i in anchor_idx + 1..n_points {
            r_grid[i] = r_grid[i - 1] + map.integrate(y_grid[i - 1], y_grid[i])?;
        }
        for i in (0..anchor_idx).rev() {
            r_grid[i] = r_grid[i + 1] - map.integrate(y_grid[i], y_grid[i + 1])?;
        }
        if r_grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Integration("tabulated r is not strictly increasing".into()));
        }
        map.y_grid = y_grid;
        map.r_grid = r_grid;
        Ok(map)
    }

    fn march(&self, y0: f64, r0: f64, step: f64, target: f64) -> Result<f64> {
        let (mut y, mut r) = (y0, r0);
        let forward = step > 0.0;
        for _ in 0..1_000_000 {
            if (forward && r >= target) || (!forward && r <= target) {
                return Ok(y);
            }
            let seg = if forward {
                self.integrate(y, y + step)?
            } else {
                -self.integrate(y + step, y)?
            };
            y += step;
            r += seg;
        }
        Err(Error::Integration("window not reached".into()))
    }

    /// dr/dy = √R(z(y)) / 2
    fn dr_dy(&self, y: f64) -> Result<f64> {
        let (z, _) = logistic(y);
        let rz = self.params.r_poly(z);
        if rz <= 0.0 {
            return Err(Error::Integration(format!("R(z) = {rz} <= 0 at z = {z}")));
        }
        Ok(0.5 * rz.sqrt())
    }

    fn gl_segment(&self, y0: f64, y1: f64) -> Result<f64> {
        let (x, w) = &self.gl;
        let half = 0.5 * (y1 - y0);
        let mid = 0.5 * (y1 + y0);
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * self.dr_dy(mid + half * xi)?;
        }
        Ok(s * half)
    }

    /// Integral of dr/dy on `[y0, y1]` by composite Gauss-Legendre with
    /// panels no wider than `MAX_PANEL`; the integrand is analytic in a strip
    /// around the real axis, so the rule converges geometrically.
    fn integrate(&self, y0: f64, y1: f64) -> Result<f64> {
        if y0 == y1 {
            return Ok(0.0);
        }
        let panels = ((y1 - y0).abs() / MAX_PANEL).ceil().max(1.0) as usize;
        let h = (y1 - y0) / panels as f64;
        let mut s = 0.0;
        for i in 0..panels {
            let a = y0 + i as f64 * h;
            s += self.gl_segment(a, a + h)?;
        }
        Ok(s)
    }

    fn series_r(&self, z: f64) -> f64 {
        match &self.origin {
            Origin::HalfLine { sqrt_tau, coef } => {
                let mut s = 0.0;
                let mut zk = 1.0;
                for (k, c) in coef.iter().enumerate() {
                    s += c * zk / (2 * k + 1) as f64;
                    zk *= z;
                }
                sqrt_tau * z.sqrt() * s
            }
            Origin::FullLine => unreachable!(),
        }
    }

    fn series_z(&self, r: f64) -> f64 {
        let Origin::HalfLine { sqrt_tau, .. } = self.origin else {
            unreachable!()
        };
        if r <= 0.0 {
            return 0.0;
        }
        // solve series_r(√z²) = r by Newton in t = √z
        let mut t = r / sqrt_tau;
        for _ in 0..50 {
            let z = t * t;
            let f = self.series_r(z) - r;
            let h = 1e-6 * t;
            let df = (self.series_r((t + h) * (t + h)) - self.series_r((t - h) * (t - h))) / (2.0 * h);
            let dt = f / df;
            t -= dt;
            if dt.abs() <= 1e-16 * t {
                break;
            }
        }
        t * t
    }

    pub fn params(&self) -> &NatanzonParams {
        &self.params
    }

    /// `[r_lo, r_hi]` covered by the map.
    pub fn range(&self) -> (f64, f64) {
        (self.r_lo, self.r_hi)
    }

    pub fn is_full_line(&self) -> bool {
        matches!(self.origin, Origin::FullLine)
    }

    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    /// Tabulated `z` values (one per `r_grid` node).
    pub fn z_grid(&self) -> Vec<f64> {
        self.y_grid.iter().map(|&y| logistic(y).0).collect()
    }

    fn check_r(&self, r: f64) -> Result<()> {
        let tol = 1e-12 * (1.0 + self.r_hi.abs());
        if !(r >= self.r_lo - tol && r <= self.r_hi + tol) {
            return Err(Error::OutOfRange {
                value: r,
                lo: self.r_lo,
                hi: self.r_hi,
            });
        }
        Ok(())
    }

    /// `(z, 1 - z)` at `r`.
    pub fn zw_of_r(&self, r: f64) -> Result<(f64, f64)> {
        self.check_r(r)?;
        if matches!(self.origin, Origin::HalfLine { .. }) && r <= self.r_grid[0] {
            let z = self.series_z(r);
            return Ok((z, 1.0 - z));
        }
        let y = self.y_of_r(r)?;
        Ok(logistic(y))
    }

    fn y_of_r(&self, r: f64) -> Result<f64> {
        let n = self.r_grid.len();
        let k = match self.r_grid.partition_point(|&v| v <= r) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        };
        let (r0, r1) = (self.r_grid[k], self.r_grid[k + 1]);
        let (y0, y1) = (self.y_grid[k], self.y_grid[k + 1]);
        let mut y = y0 + (y1 - y0) * (r - r0) / (r1 - r0);
        for _ in 0..30 {
            let f = r0 + self.integrate(y0, y)? - r;
            let dy = f / self.dr_dy(y)?;
            y -= dy;
            if dy.abs() <= 1e-15 * (1.0 + y.abs()) {
                break;
            }
        }
        Ok(y)
    }

    pub fn z_of_r(&self, r: f64) -> Result<f64> {
        self.zw_of_r(r).map(|(z, _)| z)
    }

    /// `z`, `1-z` and analytic derivatives at `r`.
    pub fn point(&self, r: f64) -> Result<MapPoint> {
        let (z, w) = self.zw_of_r(r)?;
        let (dz, d2z, d3z) = if z > 0.0 {
            derivatives_at(&self.params, z, w)?
        } else {
            (0.0, 0.0, 0.0)
        };
        Ok(MapPoint { r, z, w, dz, d2z, d3z })
    }

    /// Inverse map. Near `z = 1` the result carries the conditioning of
    /// `1 - z`; use [`CoordinateMap::r_of_zw`] when `1 - z` is known exactly.
    pub fn r_of_z(&self, z: f64) -> Result<f64> {
        self.r_of_zw(z, 1.0 - z)
    }

    /// Inverse map from `z` and `w = 1 - z`.
    pub fn r_of_zw(&self, z: f64, w: f64) -> Result<f64> {
        let half_line = matches!(self.origin, Origin::HalfLine { .. });
        let y_lo = self.y_grid[0];
        let y_hi = *self.y_grid.last().unwrap();
        let out = || Error::OutOfRange {
            value: z,
            lo: if half_line { 0.0 } else { logistic(y_lo).0 },
            hi: logistic(y_hi).0,
        };
        if !(z >= 0.0 && w > 0.0) {
            return Err(out());
        }
        if half_line && z <= SEED_Z {
            return Ok(self.series_r(z));
        }
        let y = (z / w).ln();
        if !(y >= y_lo && y <= y_hi) {
            return Err(out());
        }
        let n = self.y_grid.len();
        let k = self.y_grid.partition_point(|&v| v <= y).clamp(1, n - 1) - 1;
        Ok(self.r_grid[k] + self.integrate(self.y_grid[k], y)?)
    }

    /// Potential at `r` through the map.
    pub fn potential_at(&self, r: f64) -> Result<f64> {
        let (z, w) = self.zw_of_r(r)?;
        potential_zw(&self.params, z, w)
    }

    /// Maximum over table nodes of `|dz/dr - 2z(1-z)/√R|`, with `dz/dr` taken
    /// from eighth-order differences of the tabulated `r(y)`.
    pub fn ode_residual(&self) -> f64 {
        let dy = self.y_grid[1] - self.y_grid[0];
        let dr_dy = UniformDiff::eighth_order(dy).d1(&self.r_grid);
        let mut worst: f64 = 0.0;
        for (i, &y) in self.y_grid.iter().enumerate() {
            let (z, w) = logistic(y);
            let numeric = z * w / dr_dy[i];
            let exact = 2.0 * z * w / self.params.r_poly(z).sqrt();
            worst = worst.max((numeric - exact).abs());
        }
        worst
    }

    /// CSV with columns `r,z,dz_dr`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r,z,dz_dr")?;
        for (&r, &y) in self.r_grid.iter().zip(&self.y_grid) {
            let (z, w) = logistic(y);
            let dz = 2.0 * z * w / self.params.r_poly(z).sqrt();
            writeln!(
                out,
                "{},{},{}",
                crate::report::fmt_num(r),
                crate::report::fmt_num(z),
                crate::report::fmt_num(dz)
            )?;
        }
        Ok(())
    }
}

/// Potential at `r` (`potential_in_z` composed with the map).
pub fn potential_in_r(map: &CoordinateMap, r: f64) -> Result<f64> {
    map.potential_at(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{pt_to_natanzon, PtParams};

    fn pt_map(a: f64, b: f64) -> CoordinateMap {
        let p = pt_to_natanzon(&PtParams::new(a, b, false).unwrap());
        CoordinateMap::build(&p, 20.0, 4000).unwrap()
    }

    #[test]
    fn pt_map_is_tanh_squared() {
        let m = pt_map(2.0, 1.0);
        assert_eq!(m.z_of_r(0.0).unwrap(), 0.0);
        let z1 = m.z_of_r(1.0).unwrap();
        assert!((z1 - 1f64.tanh().powi(2)).abs() < 1e-13);
        assert!((z1 - 0.580_025_658_385_974).abs() < 1e-12);
        let z2 = m.z_of_r(2.0).unwrap();
        assert!((z2 - 0.929_349_175_146_836).abs() < 1e-12);
        let mut worst: f64 = 0.0;
        for i in 0..=2000 {
            let r = 0.05 + i as f64 * (10.0 - 0.05) / 2000.0;
            worst = worst.max((m.z_of_r(r).unwrap() - r.tanh().powi(2)).abs());
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }

    #[test]
    fn tail_keeps_relative_precision() {
        let m = pt_map(2.0, 1.0);
        let (_, w) = m.zw_of_r(15.0).unwrap();
        let exact = 1.0 / 15f64.cosh().powi(2);
        assert!(((w - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn round_trip() {
        let m = pt_map(2.0, 1.0);
        for r in [1e-9, 1e-5, 0.01, 0.7, 3.3, 8.0] {
            let z = m.z_of_r(r).unwrap();
            let back = m.r_of_z(z).unwrap();
            assert!((back - r).abs() < 1e-9, "r={r}: {back}");
        }
        for r in [8.0, 12.0, 19.5] {
            let (z, w) = m.zw_of_r(r).unwrap();
            let back = m.r_of_zw(z, w).unwrap();
            assert!((back - r).abs() < 1e-11, "r={r}: {back}");
        }
    }

    #[test]
    fn out_of_range() {
        let m = pt_map(2.0, 1.0);
        assert!(matches!(m.z_of_r(-0.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(m.z_of_r(20.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(m.r_of_z(1.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn ode_residual_small() {
        for m in [
            pt_map(2.0, 1.0),
            CoordinateMap::build(&NatanzonParams::new(20.0, 2.0, -1.0, 1.0, 1.0, 1.0), 20.0, 4000).unwrap(),
            CoordinateMap::build(&NatanzonParams::new(0.0, 0.0, -1.0, 0.0, 1.0, 1.0), 20.0, 4000).unwrap(),
            CoordinateMap::build(&NatanzonParams::new(2.0, 1.0, -1.0, 0.5, 0.0, 2.0), 20.0, 4000).unwrap(),
        ] {
            assert!(m.ode_residual() < 1e-8, "{}", m.ode_residual());
            assert!(m.r_grid().windows(2).all(|p| p[1] > p[0]));
            let z = m.z_grid();
            assert!(z.windows(2).all(|p| p[1] >= p[0]));
        }
    }

    #[test]
    fn full_line_map_is_anchored() {
        // √R ≡ 1: z = e^{2r}/(1+e^{2r}), i.e. y = 2r exactly
        let p = NatanzonParams::new(0.0, 0.0, -1.0, 0.0, 1.0, 1.0);
        let m = CoordinateMap::build(&p, 10.0, 1000).unwrap();
        assert!(m.is_full_line());
        assert_eq!(m.range(), (-10.0, 10.0));
        for r in [-9.0, -1.0, 0.0, 0.3, 5.0] {
            let z = m.z_of_r(r).unwrap();
            let exact = 1.0 / (1.0 + (-2.0 * r).exp());
            assert!((z - exact).abs() < 1e-13, "r={r}");
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let params = [
            pt_to_natanzon(&PtParams::new(3.0, 2.0, false).unwrap()),
            NatanzonParams::new(20.0, 2.0, -1.0, 1.0, 1.0, 1.0),
        ];
        for p in params {
            let m = CoordinateMap::build(&p, 12.0, 2000).unwrap();
            let h = 1e-3;
            for r in [0.4, 1.0, 2.5, 6.0] {
                let pt = m.point(r).unwrap();
                let zs: Vec<f64> = (-4..=4).map(|k| m.z_of_r(r + k as f64 * h).unwrap()).collect();
                let d = UniformDiff::eighth_order(h);
                let d1 = d.d1(&zs)[4];
                let d2 = d.d2(&zs)[4];
                assert!((d1 - pt.dz).abs() < 1e-6, "z' at {r}");
                assert!((d2 - pt.d2z).abs() < 1e-6, "z'' at {r}");
                let dps: Vec<f64> = (-4..=4).map(|k| m.point(r + k as f64 * h).unwrap().d2z).collect();
                assert!((d.d1(&dps)[4] - pt.d3z).abs() < 1e-6, "z''' at {r}");
            }
        }
    }

    #[test]
    fn potential_in_r_examples() {
        let m = pt_map(2.0, 1.0);
        let v = potential_in_r(&m, 1.0).unwrap();
        let exact = -6.0 / 1f64.cosh().powi(2);
        assert!((v - exact).abs() < 1e-12);
        assert!((v + 2.519_846_049_684_157).abs() < 1e-12);
        assert!(potential_in_r(&m, 15.0).unwrap().abs() < 1e-5);

        let m = pt_map(3.0, 2.0);
        let v = potential_in_r(&m, 0.5).unwrap();
        let exact = -12.0 / 0.5f64.cosh().powi(2) + 2.0 / 0.5f64.sinh().powi(2);
        assert!((v - exact).abs() < 1e-11);
        assert!((v + 2.071_984_041_928_793).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = pt_to_natanzon(&PtParams::new(2.0, 1.0, false).unwrap());
        assert!(CoordinateMap::build(&p, 20.0, 50).is_err());
        assert!(CoordinateMap::build(&p, -1.0, 500).is_err());
        let bad = NatanzonParams::new(0.0, 0.0, -1.0, 1.0, -1.0, 1.0);
        assert!(CoordinateMap::build(&bad, 20.0, 500).is_err());
    }
}
