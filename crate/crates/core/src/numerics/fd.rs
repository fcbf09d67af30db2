//! Finite-difference derivatives on uniform grids.

/// Fornberg's algorithm: weights `w[d][j]` for the `d`-th derivative at `x0`
/// from samples at `xs[j]`, for `d = 0..=max_order`.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// First and second derivatives on a uniform grid.
///
/// Interior nodes use the centered `2*half+1` point stencil (order `2*half`);
/// the `half` nodes at each edge fall back to shifted one-sided stencils of the
/// same width, which are noticeably less accurate.
#[derive(Debug, Clone)]
pub struct UniformDiff {
    h: f64,
    half: usize,
    // weights[d-1][shift] for stencil starting at i - shift
    weights: [Vec<Vec<f64>>; 2],
}

impl UniformDiff {
    pub fn new(h: f64, half: usize) -> Self {
        assert!(h > 0.0 && half >= 1);
        let width = 2 * half + 1;
        let mut w1 = Vec::with_capacity(width);
        let mut w2 = Vec::with_capacity(width);
        for shift in 0..width {
            let xs: Vec<f64> = (0..width).map(|j| j as f64 - shift as f64).collect();
            let w = fornberg_weights(0.0, &xs, 2);
            w1.push(w[1].iter().map(|v| v / h).collect());
            w2.push(w[2].iter().map(|v| v / (h * h)).collect());
        }
        Self {
            h,
            half,
            weights: [w1, w2],
        }
    }

    /// Eighth-order centered scheme.
    pub fn eighth_order(h: f64) -> Self {
        Self::new(h, 4)
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn half_width(&self) -> usize {
        self.half
    }

    /// Formal order of the interior scheme.
    pub fn order(&self) -> usize {
        2 * self.half
    }

    fn apply(&self, f: &[f64], d: usize) -> Vec<f64> {
        let n = f.len();
        let width = 2 * self.half + 1;
        assert!(n >= width, "grid too short for stencil");
        let table = &self.weights[d - 1];
        (0..n)
            .map(|i| {
                let start = if i < self.half {
                    0
                } else if i + self.half >= n {
                    n - width
                } else {
                    i - self.half
                };
                let shift = i - start;
                table[shift]
                    .iter()
                    .zip(&f[start..start + width])
                    .map(|(w, v)| w * v)
                    .sum()
            })
            .collect()
    }

    pub fn d1(&self, f: &[f64]) -> Vec<f64> {
        self.apply(f, 1)
    }

    pub fn d2(&self, f: &[f64]) -> Vec<f64> {
        self.apply(f, 2)
    }
}
