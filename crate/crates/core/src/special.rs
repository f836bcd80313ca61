//! Log-space special functions.
//!
//! Every factorial and power that appears in Fock-basis matrix elements goes
//! through [`ln_gamma`] so that dimensions up to ~1024 never overflow.

use std::f64::consts::PI;

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Natural log of the gamma function for `x > 0`.
///
/// Returns NaN for non-positive or non-finite arguments.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return f64::NAN;
    }
    // Exact on small integers; avoids the approximation noise near the zeros
    // of ln Γ at 1 and 2.
    if x == x.floor() && x <= 30.0 {
        return ln_factorial(x as usize - 1);
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), with 1-x > 0.5
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let mut denom = x;
    let mut series = LANCZOS_C0;
    for c in LANCZOS_COEFFS {
        denom += 1.0;
        series += c / denom;
    }
    let t = x + LANCZOS_G;
    (x + 0.5) * t.ln() - t + (SQRT_2PI * series / x).ln()
}

/// `ln n!`, exact summation for small `n` and Lanczos beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 30 {
        let mut acc = 1.0f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        acc.ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Radial moment `∫_0^∞ e^{-r²} r^{p} dr = Γ((p+1)/2) / 2`, in log form.
pub fn ln_radial_moment(p: usize) -> f64 {
    ln_gamma((p as f64 + 1.0) / 2.0) - std::f64::consts::LN_2
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]
mod tests {
    use super::*;

    // Reference values from a 40-digit evaluation.
    const REFERENCE: [(f64, f64); 11] = [
        (0.5, 0.572_364_942_924_700_087_1),
        (1.5, -0.120_782_237_635_245_222_3),
        (3.5, 1.200_973_602_347_074_224_8),
        (10.5, 13.940_625_219_403_763_633),
        (100.0, 359.134_205_369_575_398_78),
        (100.5, 361.435_540_467_777_621_56),
        (1000.25, 5906.947_268_271_117_177),
        (2048.0, 13564.326_353_384_676_747),
        (0.1, 2.252_712_651_734_205_959_9),
        (1e-3, 6.907_178_885_383_853_682_5),
        (7.25, 7.052_185_450_738_539_444_9),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, expected) in REFERENCE {
            let got = ln_gamma(x);
            let err = (got - expected).abs() / expected.abs().max(1.0);
            assert!(err < 1e-12, "ln_gamma({x}) = {got}, expected {expected}");
        }
    }

    #[test]
    fn integers_agree_with_log_sums() {
        let mut acc = 0.0f64;
        for n in 1..=2047usize {
            acc += (n as f64).ln();
            let got = ln_gamma(n as f64 + 1.0);
            assert!(
                (got - acc).abs() <= 1e-12 * acc.max(1.0),
                "n = {n}: {got} vs {acc}"
            );
        }
    }

    #[test]
    fn half_integers_follow_duplication() {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        for k in 0..1000usize {
            let expected =
                ln_factorial(2 * k) + 0.5 * PI.ln() - (k as f64) * 4f64.ln() - ln_factorial(k);
            let got = ln_gamma(k as f64 + 0.5);
            assert!(
                (got - expected).abs() <= 1e-12 * expected.abs().max(1.0),
                "k = {k}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn invalid_arguments_are_nan() {
        assert!(ln_gamma(0.0).is_nan());
        assert!(ln_gamma(-1.5).is_nan());
        assert!(ln_gamma(f64::INFINITY).is_nan());
    }

    #[test]
    fn radial_moments() {
        // ∫ e^{-r²} r dr = 1/2, ∫ e^{-r²} r³ dr = 1/2, ∫ e^{-r²} r² dr = √π/4
        assert!((ln_radial_moment(1).exp() - 0.5).abs() < 1e-15);
        assert!((ln_radial_moment(3).exp() - 0.5).abs() < 1e-15);
        assert!((ln_radial_moment(2).exp() - PI.sqrt() / 4.0).abs() < 1e-15);
    }
}
