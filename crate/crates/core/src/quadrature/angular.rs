//! Angular integrals over a 2π window.
//!
//! Integrands here are `θ^k` times a trigonometric polynomial. The periodic
//! factor is sampled at `M` midpoint nodes; the non-periodic `θ^k` is handled
//! by product-integration weights built from the closed-form Fourier moments
//! `∫ φ^k e^{iqφ} dφ`, so the rule is exact for every trigonometric
//! polynomial of degree below `M/2` (and for the sine half of degree `M/2`).

use std::f64::consts::PI;

use num_complex::Complex64;

/// `∫_{-π}^{π} φ^k e^{iqφ} dφ` for integer `q`.
pub fn fourier_moment(k: u32, q: i64) -> Complex64 {
    if q == 0 {
        return if k % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(2.0 * PI.powi(k as i32 + 1) / (k + 1) as f64, 0.0)
        };
    }
    let iq = Complex64::new(0.0, q as f64);
    let parity = if q % 2 == 0 { 1.0 } else { -1.0 };
    // integrate by parts down to k = 0, where the integral vanishes
    let mut value = Complex64::new(0.0, 0.0);
    for j in 1..=k {
        let boundary = parity * (PI.powi(j as i32) - (-PI).powi(j as i32));
        value = (Complex64::new(boundary, 0.0) - value * j as f64) / iq;
    }
    value
}

/// `∫_{θ0-π}^{θ0+π} θ^k e^{iqθ} dθ`.
pub fn window_fourier_moment(k: u32, q: i64, center: f64) -> Complex64 {
    let shift = Complex64::from_polar(1.0, q as f64 * center);
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..=k {
        acc += fourier_moment(l, q) * binomial(k, l) * center.powi((k - l) as i32);
    }
    shift * acc
}

pub(crate) fn binomial(k: u32, l: u32) -> f64 {
    (0..l).fold(1.0, |acc, j| acc * (k - j) as f64 / (j + 1) as f64)
}

/// Midpoint offsets `φ_j = −π + (j + ½)·2π/M` from the window center.
pub fn midpoint_offsets(m: usize) -> Vec<f64> {
    let step = 2.0 * PI / m as f64;
    (0..m).map(|j| -PI + (j as f64 + 0.5) * step).collect()
}

/// Product weights `v_j` with `Σ_j v_j P(φ_j) = ∫_{-π}^{π} φ^k P(φ) dφ` for
/// trigonometric polynomials `P` of degree below `M/2`.
pub fn centered_power_weights(m: usize, k: u32) -> Vec<f64> {
    assert!(
        m >= 2 && m.is_multiple_of(2),
        "angular node count must be even"
    );
    let half = (m / 2) as i64;
    let moments: Vec<Complex64> = (0..=half).map(|q| fourier_moment(k, q)).collect();
    midpoint_offsets(m)
        .iter()
        .map(|&phi| {
            let mut acc = moments[0].re;
            for q in 1..half {
                acc +=
                    2.0 * (Complex64::from_polar(1.0, -(q as f64) * phi) * moments[q as usize]).re;
            }
            acc += (Complex64::from_polar(1.0, -(half as f64) * phi) * moments[half as usize]).re;
            acc / m as f64
        })
        .collect()
}

/// Product weights for `θ^k` in absolute coordinates on a window centered
/// at `center`.
pub fn window_power_weights(m: usize, k: u32, center: f64) -> Vec<f64> {
    let mut out = vec![0.0; m];
    for l in 0..=k {
        let coeff = binomial(k, l) * center.powi((k - l) as i32);
        if coeff == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(centered_power_weights(m, l)) {
            *o += coeff * v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss::gauss_legendre;

    /// Composite Gauss–Legendre on [a, b], independent of the closed forms.
    fn brute_integral(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
        let (x, w) = gauss_legendre(20);
        let panels = 400;
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let left = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                acc += f(left + 0.5 * (xi + 1.0) * h) * (0.5 * h * wi);
            }
        }
        acc
    }

    #[test]
    fn closed_forms_match_numeric_integration() {
        for k in 0..=4u32 {
            for q in -12i64..=12 {
                let exact = fourier_moment(k, q);
                let numeric = brute_integral(
                    |phi| Complex64::from_polar(phi.powi(k as i32), q as f64 * phi),
                    -PI,
                    PI,
                );
                assert!(
                    (exact - numeric).norm() < 1e-11,
                    "k={k} q={q}: {exact} vs {numeric}"
                );
            }
        }
    }

    #[test]
    fn known_values() {
        // ∫θ e^{ikθ} = 2π(−1)^k/(ik), ∫θ² e^{ikθ} = 4π(−1)^k/k², ∫θ² = 2π³/3
        let v = fourier_moment(1, 3);
        assert!((v - Complex64::new(0.0, 2.0 * PI / 3.0)).norm() < 1e-14);
        assert!((fourier_moment(2, 2).re - PI).abs() < 1e-14);
        assert!((fourier_moment(2, 0).re - 2.0 * PI.powi(3) / 3.0).abs() < 1e-13);
    }

    #[test]
    fn shifted_window_moments() {
        let c = 0.7;
        for k in 0..=3u32 {
            for q in -5i64..=5 {
                let exact = window_fourier_moment(k, q, c);
                let numeric = brute_integral(
                    |t| Complex64::from_polar(t.powi(k as i32), q as f64 * t),
                    c - PI,
                    c + PI,
                );
                assert!((exact - numeric).norm() < 1e-10, "k={k} q={q}");
            }
        }
    }

    #[test]
    fn uniform_density_is_exact_on_coarse_grids() {
        for m in [4, 8, 16, 512] {
            let v2 = centered_power_weights(m, 2);
            let second: f64 = v2.iter().sum::<f64>() / (2.0 * PI);
            assert!((second - PI * PI / 3.0).abs() < 1e-13, "m={m}");
            let v1 = centered_power_weights(m, 1);
            assert!(v1.iter().sum::<f64>().abs() < 1e-13);
        }
    }

    #[test]
    fn exact_for_band_limited_densities() {
        // P(φ) = 1 + 0.6 cos(3φ − 0.2) + 0.3 sin(7φ), M = 16 covers degree 7
        let p = |phi: f64| 1.0 + 0.6 * (3.0 * phi - 0.2).cos() + 0.3 * (7.0 * phi).sin();
        let m = 16;
        let offsets = midpoint_offsets(m);
        for k in 0..=4u32 {
            let v = centered_power_weights(m, k);
            let got: f64 = v.iter().zip(&offsets).map(|(w, &phi)| w * p(phi)).sum();
            let numeric = brute_integral(
                |phi| Complex64::new(phi.powi(k as i32) * p(phi), 0.0),
                -PI,
                PI,
            );
            assert!(
                (got - numeric.re).abs() < 1e-11,
                "k={k}: {got} vs {}",
                numeric.re
            );
        }
    }

    #[test]
    fn zeroth_weights_are_uniform() {
        let v = centered_power_weights(10, 0);
        for w in v {
            assert!((w - 2.0 * PI / 10.0).abs() < 1e-15);
        }
    }
}
