//! Fixed-precision number formatting shared by every report writer.

/// Significant digits kept in reports.
pub const REPORT_DIGITS: usize = 12;

/// Rounds to [`REPORT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", REPORT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest round-trip text for `x`, switching to exponent form outside
/// `[1e-4, 1e15)`.
pub fn fmt_exact(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Report text for `x` at [`REPORT_DIGITS`] significant digits.
pub fn fmt_sig(x: f64) -> String {
    fmt_exact(round_sig(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI.powi(2) / 3.0), "3.2898681337");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(fmt_sig(1.234e-20), "1.234e-20");
        assert_eq!(fmt_sig(9.999_999_999_999_5), "10");
    }

    #[test]
    fn exact_round_trip() {
        for x in [0.1, -2.5e-300, 1.0 / 3.0, 12345.678, 6.02e23] {
            assert_eq!(fmt_exact(x).parse::<f64>().unwrap(), x);
        }
    }
}
