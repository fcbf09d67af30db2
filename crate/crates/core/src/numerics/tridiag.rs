//! Sturm-sequence bisection for symmetric tridiagonal matrices.

/// Number of eigenvalues strictly below `x` for the matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 {
            f64::EPSILON * (off[i - 1].abs() + 1.0)
        } else {
            q
        };
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues, ascending, to absolute tolerance `tol`.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize, tol: f64) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n);
    let k = k.min(n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let mut out = Vec::with_capacity(k);
    let mut floor = lo;
    for idx in 0..k {
        let (mut a, mut b) = (floor, hi);
        while b - a > tol.max(4.0 * f64::EPSILON * (a.abs() + b.abs())) {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
        }
        let ev = 0.5 * (a + b);
        out.push(ev);
        floor = a;
    }
    out
}
