use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::angular::{midpoint_offsets, window_power_weights};
use super::gauss::{gauss_laguerre, half_range_hermite};
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

pub const DEFAULT_RADIAL_NODES: usize = 128;
pub const MIN_ANGULAR_NODES: usize = 512;
const MAX_RADIAL_NODES: usize = 1024;

/// Default angular node count for states of dimension `dim`.
pub fn default_angular_nodes(dim: usize) -> usize {
    let n = MIN_ANGULAR_NODES.max(8 * dim);
    n + n % 2
}

/// Radial quadrature family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RadialRule {
    /// Gauss rule for `e^{-r²} dr` on `[0, ∞)`: exact for every power `r^p`
    /// with `p < 2n`, odd and even alike.
    #[default]
    HalfRangeHermite,
    /// Gauss–Laguerre in `u = r²`: exact for odd powers only; even powers
    /// become `√u`-type integrands and converge algebraically.
    LaguerreSquared,
}

/// Tensor-product polar grid over the complex plane.
#[derive(Clone, Debug)]
pub struct PolarGrid {
    pub radial_nodes: Vec<f64>,
    /// Weights for `∫_0^∞ f(r) r dr`, with the Gaussian factor divided out.
    pub radial_weights: Vec<f64>,
    /// Absolute angles `θ_j`, symmetric about the window center.
    pub angular_nodes: Vec<f64>,
    pub angular_weight: f64,
    pub window: PhaseWindow,
    pub rule: RadialRule,
}

/// One grid point handed to integrands.
#[derive(Clone, Copy, Debug)]
pub struct PolarNode {
    pub alpha: Complex64,
    pub r: f64,
    /// Angle in window coordinates.
    pub theta: f64,
}

pub fn build_polar_grid(
    n_radial: usize,
    n_angular: usize,
    window: PhaseWindow,
) -> Result<PolarGrid> {
    build_polar_grid_with(n_radial, n_angular, window, RadialRule::default())
}

pub fn build_polar_grid_with(
    n_radial: usize,
    n_angular: usize,
    window: PhaseWindow,
    rule: RadialRule,
) -> Result<PolarGrid> {
    if !(2..=MAX_RADIAL_NODES).contains(&n_radial) {
        return Err(PhaseError::validation(format!(
            "radial node count must be in 2..={MAX_RADIAL_NODES}, got {n_radial}"
        )));
    }
    if n_angular < 4 || !n_angular.is_multiple_of(2) {
        return Err(PhaseError::validation(format!(
            "angular node count must be even and at least 4, got {n_angular}"
        )));
    }
    let (radial_nodes, radial_weights) = match rule {
        RadialRule::HalfRangeHermite => {
            let (r, w) = half_range_hermite(n_radial);
            let weights = r.iter().zip(&w).map(|(r, w)| w * r).collect();
            (r, weights)
        }
        RadialRule::LaguerreSquared => {
            let (u, w) = gauss_laguerre(n_radial);
            (
                u.iter().map(|u| u.sqrt()).collect(),
                w.iter().map(|w| 0.5 * w).collect(),
            )
        }
    };
    let angular_nodes = midpoint_offsets(n_angular)
        .into_iter()
        .map(|phi| window.center() + phi)
        .collect();
    Ok(PolarGrid {
        radial_nodes,
        radial_weights,
        angular_nodes,
        angular_weight: 2.0 * PI / n_angular as f64,
        window,
        rule,
    })
}

impl PolarGrid {
    pub fn n_radial(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn n_angular(&self) -> usize {
        self.angular_nodes.len()
    }

    /// Product weights for `θ^k` (absolute angle) against band-limited
    /// periodic factors.
    pub fn power_weights(&self, k: u32) -> Vec<f64> {
        window_power_weights(self.n_angular(), k, self.window.center())
    }

    /// Radial sum `Σ_i w_i f(r_i)`.
    pub fn radial_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.radial_nodes
            .iter()
            .zip(&self.radial_weights)
            .map(|(&r, &w)| w * f(r))
            .sum()
    }
}

/// `Σ_{i,j} f(r_i e^{iθ_j}) w_i · 2π/M`.
///
/// Each angular column is summed in radial order and columns are combined in
/// angular order, so the result does not depend on the thread count.
pub fn integrate_polar(
    grid: &PolarGrid,
    f: impl Fn(&PolarNode) -> Complex64 + Sync,
) -> Result<Complex64> {
    let columns: Vec<Result<Complex64>> = grid
        .angular_nodes
        .par_iter()
        .enumerate()
        .map(|(j, &theta)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, (&r, &w)) in grid
                .radial_nodes
                .iter()
                .zip(&grid.radial_weights)
                .enumerate()
            {
                let node = PolarNode {
                    alpha: Complex64::from_polar(r, theta),
                    r,
                    theta,
                };
                let v = f(&node);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(PhaseError::Integration {
                        node: format!("(radial {i}, angular {j}) r={r} theta={theta}"),
                    });
                }
                acc += v * w;
            }
            Ok(acc)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for c in columns {
        total += c?;
    }
    Ok(total * grid.angular_weight)
}
