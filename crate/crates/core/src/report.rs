//! Deterministic number formatting shared by the CSV and JSON writers.

/// Round to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Shortest representation of `round15(x)`.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round15(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(fmt_num(-2.25), "-2.25");
        assert_eq!(round15(round15(std::f64::consts::PI)), round15(std::f64::consts::PI));
        assert!(round15(f64::NAN).is_nan());
    }
}
