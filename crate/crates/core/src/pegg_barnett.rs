//! Pegg-Barnett phase formalism in an `(s+1)`-dimensional space, used as a
//! comparison baseline.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::TruncatedState;
use crate::matrix::CMatrix;
use crate::moments::{check_k_max, GridInfo, MomentMethod, MomentReport};
use crate::operator::{Meta, Method, OperatorMatrix};
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

pub const DEFAULT_PB_S: usize = 255;

/// Phase states `|θ_m⟩`, `θ_m = θ0 + 2πm/(s+1)`, `m = 0..=s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PBConfig {
    s: usize,
    theta0: f64,
}

impl PBConfig {
    pub fn new(s: usize, theta0: f64) -> Result<Self> {
        if s < 1 {
            return Err(PhaseError::validation("Pegg-Barnett s must be at least 1"));
        }
        if !theta0.is_finite() {
            return Err(PhaseError::validation("Pegg-Barnett theta0 must be finite"));
        }
        Ok(PBConfig { s, theta0 })
    }

    /// Phase points placed symmetrically about the window center:
    /// `θ0 = center − sπ/(s+1)`.
    pub fn for_window(s: usize, window: PhaseWindow) -> Result<Self> {
        Self::new(s, window.center() - s as f64 * PI / (s + 1) as f64)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dim(&self) -> usize {
        self.s + 1
    }

    /// Midpoint of the phase points; moments are centered here.
    pub fn center(&self) -> f64 {
        self.theta0 + self.s as f64 * PI / (self.s + 1) as f64
    }

    pub fn theta(&self, m: usize) -> f64 {
        self.theta0 + 2.0 * PI * m as f64 / (self.s + 1) as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..=self.s).map(|m| self.theta(m)).collect()
    }
}

/// `φ̂_PB = Σ_m θ_m |θ_m⟩⟨θ_m|`; entry `(j, k)` depends only on `j − k`.
pub fn pb_phase_operator(cfg: PBConfig) -> OperatorMatrix {
    let dim = cfg.dim();
    let span = cfg.s as i64;
    let thetas = cfg.thetas();
    let band: Vec<Complex64> = (-span..=span)
        .into_par_iter()
        .map(|q| {
            let sum: Complex64 = thetas
                .iter()
                .map(|&t| Complex64::from_polar(t, q as f64 * t))
                .sum();
            sum / dim as f64
        })
        .collect();
    let raw = CMatrix::from_fn(dim, |j, k| band[(j as i64 - k as i64 + span) as usize]);
    let entries = raw.hermitian_part();
    let meta = Meta::new()
        .with("s", cfg.s)
        .with("theta0", cfg.theta0)
        .with("dim", dim);
    OperatorMatrix::new(entries, Method::PeggBarnett, meta)
}

/// `p_m = |⟨θ_m|ψ⟩|²` with the state zero-padded to `s+1` levels.
pub fn pb_distribution(state: &TruncatedState, cfg: PBConfig) -> Result<Vec<f64>> {
    if state.dim() > cfg.dim() {
        return Err(PhaseError::dimension(format!(
            "state dimension {} exceeds the Pegg-Barnett space s+1 = {}",
            state.dim(),
            cfg.dim()
        )));
    }
    let amps = state.amplitudes();
    let norm = 1.0 / cfg.dim() as f64;
    Ok((0..cfg.dim())
        .into_par_iter()
        .map(|m| {
            let t = cfg.theta(m);
            let overlap: Complex64 = amps
                .iter()
                .enumerate()
                .map(|(n, &c)| c * Complex64::from_polar(1.0, -(n as f64) * t))
                .sum();
            overlap.norm_sqr() * norm
        })
        .collect())
}

/// Moments `Σ_m p_m θ_m^k`, accumulated about [`PBConfig::center`].
pub fn pb_moments(state: &TruncatedState, cfg: PBConfig, k_max: u32) -> Result<MomentReport> {
    check_k_max(k_max)?;
    let probs = pb_distribution(state, cfg)?;
    let center = cfg.center();
    let offsets: Vec<f64> = (0..cfg.dim()).map(|m| cfg.theta(m) - center).collect();
    let total: f64 = probs.iter().sum();
    let centered: Vec<f64> = (1..=k_max)
        .map(|k| {
            probs
                .iter()
                .zip(&offsets)
                .map(|(p, d)| p * d.powi(k as i32))
                .sum()
        })
        .collect();
    let grid = GridInfo {
        pb_s: Some(cfg.s),
        dim: Some(state.dim()),
        theta0: center,
        ..GridInfo::default()
    };
    let meta = Meta::new().with("pb_theta0", cfg.theta0);
    Ok(MomentReport::from_centered(
        MomentMethod::PeggBarnett,
        center,
        centered,
        (1.0 - total).abs(),
        grid,
        meta,
    ))
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PI2_3: f64 = 3.289_868_133_696_452_8;

    fn closed_form(s: usize) -> f64 {
        let s = s as f64;
        PI2_3 * s * (s + 2.0) / ((s + 1.0) * (s + 1.0))
    }

    #[test]
    fn two_point_spectrum() {
        let cfg = PBConfig::for_window(1, PhaseWindow::default()).unwrap();
        assert_abs_diff_eq!(cfg.theta0(), -PI / 2.0, epsilon = 1e-15);
        let op = pb_phase_operator(cfg);
        // 2x2 Hermitian: eigenvalues from trace and determinant
        let tr = (op.element(0, 0) + op.element(1, 1)).re;
        let det = (op.element(0, 0) * op.element(1, 1) - op.element(0, 1) * op.element(1, 0)).re;
        let disc = (tr * tr / 4.0 - det).sqrt();
        assert_abs_diff_eq!(tr / 2.0 - disc, -PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tr / 2.0 + disc, PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_is_sum_of_phases() {
        let cfg = PBConfig::new(12, 0.3).unwrap();
        let op = pb_phase_operator(cfg);
        let trace: f64 = (0..cfg.dim()).map(|i| op.element(i, i).re).sum();
        assert_abs_diff_eq!(trace, cfg.thetas().iter().sum::<f64>(), epsilon = 1e-12);
        assert_eq!(op.entries.hermiticity_defect(), 0.0);
    }

    #[test]
    fn phase_states_are_orthonormal() {
        let cfg = PBConfig::for_window(31, PhaseWindow::default()).unwrap();
        let d = cfg.dim();
        for m in 0..d {
            for mp in 0..d {
                let overlap: Complex64 = (0..d)
                    .map(|n| Complex64::from_polar(1.0, n as f64 * (cfg.theta(mp) - cfg.theta(m))))
                    .sum::<Complex64>()
                    / d as f64;
                let expected = if m == mp { 1.0 } else { 0.0 };
                assert!((overlap - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fock_states_are_uniform() {
        for s in [1, 7, 63, 1023] {
            let cfg = PBConfig::for_window(s, PhaseWindow::default()).unwrap();
            let state = TruncatedState::fock(s.min(5), s + 1).unwrap();
            let p = pb_distribution(&state, cfg).unwrap();
            for v in &p {
                assert_abs_diff_eq!(*v, 1.0 / (s + 1) as f64, epsilon = 1e-15);
            }
            let r = pb_moments(&state, cfg, 2).unwrap();
            assert_abs_diff_eq!(r.variance, closed_form(s), epsilon = 1e-10);
            assert!(r.mean.abs() < 1e-12);
        }
        let r = pb_moments(
            &TruncatedState::fock(0, 1).unwrap(),
            PBConfig::for_window(1, PhaseWindow::default()).unwrap(),
            2,
        )
        .unwrap();
        assert_abs_diff_eq!(r.variance, PI * PI / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn operator_expectation_matches_distribution() {
        let cfg = PBConfig::for_window(15, PhaseWindow::new(0.4).unwrap()).unwrap();
        let s = TruncatedState::coherent(Complex64::new(1.0, 0.7), 16).unwrap();
        let op = pb_phase_operator(cfg);
        let r = pb_moments(&s, cfg, 1).unwrap();
        assert_abs_diff_eq!(
            op.entries.expectation(s.amplitudes()).re,
            r.mean,
            epsilon = 1e-12
        );
    }

    #[test]
    fn coherent_semiclassics() {
        let s = TruncatedState::coherent(Complex64::new(3.0, 0.0), 40).unwrap();
        let r = pb_moments(
            &s,
            PBConfig::for_window(255, PhaseWindow::default()).unwrap(),
            2,
        )
        .unwrap();
        assert!(
            (r.variance - 1.0 / 36.0).abs() < 0.1 / 36.0,
            "{}",
            r.variance
        );
        assert!(r.norm_defect < 1e-12);
    }

    #[test]
    fn guards() {
        assert!(PBConfig::new(0, 0.0).is_err());
        let cfg = PBConfig::new(3, 0.0).unwrap();
        assert!(matches!(
            pb_distribution(&TruncatedState::fock(0, 5).unwrap(), cfg),
            Err(PhaseError::Dimension(_))
        ));
    }
}
