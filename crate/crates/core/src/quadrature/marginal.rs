use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::angular::{centered_power_weights, midpoint_offsets};
use super::grid::PolarGrid;
use crate::fock::TruncatedState;
use crate::moments::{check_k_max, GridInfo, MomentMethod, MomentReport};
use crate::operator::Meta;
use crate::special::ln_factorial;
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

/// Largest acceptable `|1 − ∫P|` before moments are refused.
pub const MAX_NORM_DEFECT: f64 = 1e-4;

/// Sampled phase density `P(θ) = ∫_0^∞ Q(r e^{iθ}) r dr`.
#[derive(Clone, Debug)]
pub struct PhaseDistribution {
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub window: PhaseWindow,
    /// `|1 − Σ P_j Δθ|`.
    pub norm_defect: f64,
    /// Smallest sample before clamping round-off negatives to zero.
    pub min_before_clamp: f64,
    /// Grid that produced the samples, if any.
    pub n_radial: Option<usize>,
}

impl PhaseDistribution {
    /// Wraps samples taken at the standard midpoint nodes of `window`.
    pub fn from_samples(window: PhaseWindow, values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        if m < 4 || !m.is_multiple_of(2) {
            return Err(PhaseError::validation(format!(
                "phase distribution needs an even number (>= 4) of samples, got {m}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(PhaseError::validation(
                "phase distribution samples must be finite",
            ));
        }
        let thetas = midpoint_offsets(m)
            .into_iter()
            .map(|phi| window.center() + phi)
            .collect();
        let min_before_clamp = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let values: Vec<f64> = values.into_iter().map(|v| v.max(0.0)).collect();
        let step = 2.0 * PI / m as f64;
        let norm_defect = (1.0 - values.iter().sum::<f64>() * step).abs();
        Ok(PhaseDistribution {
            thetas,
            values,
            window,
            norm_defect,
            min_before_clamp,
            n_radial: None,
        })
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.values.len() as f64
    }

    /// Largest Fourier coefficient magnitude in the top eighth of the band.
    /// Band-limited samples give round-off here; anything larger means the
    /// angular grid is too coarse for the moment weights to be exact.
    pub fn spectral_tail(&self) -> f64 {
        let m = self.values.len();
        let offsets = midpoint_offsets(m);
        let half = m / 2;
        let lo = half - (m / 8).max(1);
        (lo..=half)
            .map(|q| {
                let c: Complex64 = self
                    .values
                    .iter()
                    .zip(&offsets)
                    .map(|(&p, &phi)| Complex64::from_polar(p, -(q as f64) * phi))
                    .sum();
                c.norm() / m as f64
            })
            .fold(0.0, f64::max)
    }
}

/// How `θ^k` is integrated against the sampled density.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MomentRule {
    /// Product-integration weights, exact for band-limited densities.
    #[default]
    Spectral,
    /// Plain Riemann sum `Σ θ_j^k P_j Δθ`; second-order accurate.
    Riemann,
}

/// Radial coherent factors `e^{-r²/2} rⁿ/√n!` on the grid, row per node.
pub(crate) fn radial_factors(grid: &PolarGrid, dim: usize) -> Vec<Vec<f64>> {
    let ln_fact: Vec<f64> = (0..dim).map(ln_factorial).collect();
    grid.radial_nodes
        .iter()
        .map(|&r| {
            let ln_r = r.ln();
            (0..dim)
                .map(|n| (-0.5 * r * r + n as f64 * ln_r - 0.5 * ln_fact[n]).exp())
                .collect()
        })
        .collect()
}

/// Radial reduction of the Q-function at every angular node.
pub fn phase_marginal(state: &TruncatedState, grid: &PolarGrid) -> Result<PhaseDistribution> {
    let dim = state.dim();
    if grid.n_angular() < 8 * dim {
        log::warn!(
            "angular grid of {} nodes is below the recommended 8 x dim = {}",
            grid.n_angular(),
            8 * dim
        );
    }
    let radial = radial_factors(grid, dim);
    let amps = state.amplitudes();
    let values: Vec<f64> = grid
        .angular_nodes
        .par_iter()
        .map(|&theta| {
            // ⟨α|ψ⟩ = Σ_n a_n(r) e^{-inθ} c_n
            let rotated: Vec<Complex64> = amps
                .iter()
                .enumerate()
                .map(|(n, &c)| c * Complex64::from_polar(1.0, -(n as f64) * theta))
                .collect();
            let mut p = 0.0;
            for (row, &w) in radial.iter().zip(&grid.radial_weights) {
                let overlap: Complex64 = row.iter().zip(&rotated).map(|(&a, &c)| c * a).sum();
                p += w * overlap.norm_sqr() / PI;
            }
            p
        })
        .collect();
    let mut dist = PhaseDistribution::from_samples(grid.window, values)?;
    dist.n_radial = Some(grid.n_radial());
    Ok(dist)
}

/// Phase moments `⟨θ^k⟩`, `k ≤ k_max`, from a sampled density.
pub fn moments_from_marginal(
    dist: &PhaseDistribution,
    k_max: u32,
    rule: MomentRule,
) -> Result<MomentReport> {
    check_k_max(k_max)?;
    if dist.norm_defect > MAX_NORM_DEFECT {
        return Err(PhaseError::convergence(format!(
            "phase density normalization defect {:.3e} exceeds {MAX_NORM_DEFECT:e}; \
             enlarge the grid or the truncation",
            dist.norm_defect
        )));
    }
    let m = dist.values.len();
    let offsets = midpoint_offsets(m);
    let step = dist.step();
    let centered: Vec<f64> = (1..=k_max)
        .map(|k| match rule {
            MomentRule::Spectral => centered_power_weights(m, k)
                .iter()
                .zip(&dist.values)
                .map(|(w, p)| w * p)
                .sum(),
            MomentRule::Riemann => offsets
                .iter()
                .zip(&dist.values)
                .map(|(phi, p)| phi.powi(k as i32) * p * step)
                .sum(),
        })
        .collect();
    let meta = Meta::new()
        .with(
            "moment_rule",
            match rule {
                MomentRule::Spectral => "spectral",
                MomentRule::Riemann => "riemann",
            },
        )
        .with("spectral_tail", dist.spectral_tail())
        .with("min_before_clamp", dist.min_before_clamp);
    let grid = GridInfo {
        n_radial: dist.n_radial,
        n_angular: Some(m),
        theta0: dist.window.center(),
        ..GridInfo::default()
    };
    Ok(MomentReport::from_centered(
        MomentMethod::QIntegral,
        dist.window.center(),
        centered,
        dist.norm_defect,
        grid,
        meta,
    ))
}
