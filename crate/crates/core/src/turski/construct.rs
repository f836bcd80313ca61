use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::matrix::CMatrix;
use crate::operator::{Meta, Method, OperatorMatrix};
use crate::quadrature::angular::{fourier_moment, window_fourier_moment};
use crate::quadrature::{radial_factors, PolarGrid};
use crate::special::{ln_factorial, ln_gamma};
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

/// Pre-symmetrization defect above which a quadrature operator is refused.
pub const MAX_QUADRATURE_DEFECT: f64 = 1e-6;

/// How the coherent-state integral is evaluated.
#[derive(Clone, Copy, Debug)]
pub enum Construction<'a> {
    /// Closed-form radial and angular integrals on the given window.
    Analytic(PhaseWindow),
    /// Discrete sum over a polar grid.
    Quadrature(&'a PolarGrid),
}

impl Construction<'_> {
    pub fn window(&self) -> PhaseWindow {
        match self {
            Construction::Analytic(w) => *w,
            Construction::Quadrature(g) => g.window,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Construction::Analytic(_) => "analytic",
            Construction::Quadrature(_) => "quadrature",
        }
    }
}

/// Angular factor `f(θ)` in `(1/π) ∫ f(θ) |α⟩⟨α| d²α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kernel {
    /// `θ^k`, absolute angle.
    Power(u32),
    /// `(θ − θ0)^k`, measured from the window center.
    CenteredPower(u32),
    /// `e^{±iθ}`.
    Exp(i32),
}

impl Kernel {
    fn hermitian(self) -> bool {
        !matches!(self, Kernel::Exp(_))
    }
}

/// `∫_0^∞ e^{-r²} r^{m+n+1} dr / √(m! n!) = Γ((m+n)/2 + 1) / (2√(m! n!))`.
fn analytic_radial(m: usize, n: usize) -> f64 {
    (ln_gamma((m + n) as f64 / 2.0 + 1.0) - LN_2 - 0.5 * (ln_factorial(m) + ln_factorial(n))).exp()
}

fn analytic_angular(kernel: Kernel, q: i64, window: PhaseWindow) -> Complex64 {
    match kernel {
        Kernel::Power(k) => window_fourier_moment(k, q, window.center()),
        Kernel::CenteredPower(k) => {
            Complex64::from_polar(1.0, q as f64 * window.center()) * fourier_moment(k, q)
        }
        Kernel::Exp(s) => {
            if q + s as i64 == 0 {
                Complex64::new(2.0 * PI, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    }
}

/// `Σ_j u_j e^{iqθ_j}` for the kernel's angular weights `u_j`.
fn quadrature_angular(kernel: Kernel, grid: &PolarGrid, dim: usize) -> Vec<Complex64> {
    let weights: Vec<Complex64> = match kernel {
        Kernel::Power(k) => grid
            .power_weights(k)
            .into_iter()
            .map(Complex64::from)
            .collect(),
        Kernel::CenteredPower(k) => {
            crate::quadrature::angular::centered_power_weights(grid.n_angular(), k)
                .into_iter()
                .map(Complex64::from)
                .collect()
        }
        Kernel::Exp(s) => grid
            .angular_nodes
            .iter()
            .map(|&t| Complex64::from_polar(grid.angular_weight, s as f64 * t))
            .collect(),
    };
    let span = dim as i64 - 1;
    (-span..=span)
        .map(|q| {
            weights
                .iter()
                .zip(&grid.angular_nodes)
                .map(|(&u, &t)| u * Complex64::from_polar(1.0, q as f64 * t))
                .sum()
        })
        .collect()
}

/// Raw `⟨m|(1/π)∫ f(θ)|α⟩⟨α| d²α|n⟩`, using `⟨m|α⟩⟨α|n⟩ ∝ r^{m+n} e^{i(m−n)θ}`.
pub(crate) fn build_raw(
    kernel: Kernel,
    dim: usize,
    construction: Construction<'_>,
) -> Result<CMatrix> {
    if dim == 0 {
        return Err(PhaseError::validation("dimension must be at least 1"));
    }
    let span = dim as i64 - 1;
    let rows: Vec<Vec<Complex64>> = match construction {
        Construction::Analytic(window) => {
            let angular: Vec<Complex64> = (-span..=span)
                .map(|q| analytic_angular(kernel, q, window))
                .collect();
            (0..dim)
                .into_par_iter()
                .map(|m| {
                    (0..dim)
                        .map(|n| {
                            let a = angular[(m as i64 - n as i64 + span) as usize];
                            if a == Complex64::new(0.0, 0.0) {
                                a
                            } else {
                                a * analytic_radial(m, n) / PI
                            }
                        })
                        .collect()
                })
                .collect()
        }
        Construction::Quadrature(grid) => {
            if grid.n_angular() < 2 * dim {
                log::warn!(
                    "angular grid of {} nodes cannot resolve dimension {dim}; expect aliasing",
                    grid.n_angular()
                );
            }
            let angular = quadrature_angular(kernel, grid, dim);
            let radial = radial_factors(grid, dim);
            (0..dim)
                .into_par_iter()
                .map(|m| {
                    (0..dim)
                        .map(|n| {
                            let r: f64 = radial
                                .iter()
                                .zip(&grid.radial_weights)
                                .map(|(row, w)| w * row[m] * row[n])
                                .sum();
                            angular[(m as i64 - n as i64 + span) as usize] * r / PI
                        })
                        .collect()
                })
                .collect()
        }
    };
    let entries = CMatrix::from_fn(dim, |m, n| rows[m][n]);
    if !entries.is_finite() {
        return Err(PhaseError::convergence(
            "operator construction produced non-finite entries",
        ));
    }
    Ok(entries)
}

pub(crate) fn build(
    kernel: Kernel,
    dim: usize,
    construction: Construction<'_>,
    method: Method,
) -> Result<OperatorMatrix> {
    let raw = build_raw(kernel, dim, construction)?;
    let window = construction.window();
    let mut meta = Meta::new()
        .with("dim", dim)
        .with("construction", construction.label())
        .with("theta0", window.center());
    if let Construction::Quadrature(grid) = construction {
        meta.set("n_radial", grid.n_radial());
        meta.set("n_angular", grid.n_angular());
    }
    let entries = if kernel.hermitian() {
        let defect = raw.hermiticity_defect();
        meta.set("hermiticity_defect", defect);
        match construction {
            Construction::Quadrature(_) => {
                if defect > MAX_QUADRATURE_DEFECT {
                    return Err(PhaseError::convergence(format!(
                        "quadrature operator is non-Hermitean by {defect:.3e} (limit \
                         {MAX_QUADRATURE_DEFECT:e}); use a larger grid"
                    )));
                }
                raw.hermitian_part()
            }
            Construction::Analytic(_) => raw,
        }
    } else {
        raw
    };
    if let Kernel::Power(k) | Kernel::CenteredPower(k) = kernel {
        meta.set("k", k as usize);
    }
    Ok(OperatorMatrix::new(entries, method, meta))
}

/// `φ̂ = (1/π) ∫ θ |α⟩⟨α| d²α` by polar quadrature, Hermitized as
/// `(A + A†)/2`; the pre-symmetrization defect is kept in the metadata.
pub fn build_phase_operator_quadrature(dim: usize, grid: &PolarGrid) -> Result<OperatorMatrix> {
    build(
        Kernel::Power(1),
        dim,
        Construction::Quadrature(grid),
        Method::TurskiQuadrature,
    )
}

/// Closed form of the phase operator. On the default window,
/// `⟨m|φ̂|n⟩ = (−1)^{m−n} Γ((m+n)/2 + 1) / (i (m−n) √(m! n!))` off the
/// diagonal and zero on it.
pub fn build_phase_operator_analytic(dim: usize, window: PhaseWindow) -> Result<OperatorMatrix> {
    build(
        Kernel::Power(1),
        dim,
        Construction::Analytic(window),
        Method::TurskiAnalytic,
    )
}

/// `(1/π) ∫ θ^k |α⟩⟨α| d²α` for `k` in `1..=4`. This is the k-th moment
/// operator, not the k-th matrix power of `φ̂`.
pub fn build_moment_operator(
    k: u32,
    dim: usize,
    construction: Construction<'_>,
) -> Result<OperatorMatrix> {
    crate::moments::check_k_max(k)?;
    let method = match (k, construction) {
        (1, Construction::Analytic(_)) => Method::TurskiAnalytic,
        (1, Construction::Quadrature(_)) => Method::TurskiQuadrature,
        _ => Method::Moment(k),
    };
    build(Kernel::Power(k), dim, construction, method)
}

/// `Ê = (1/π) ∫ e^{±iθ} |α⟩⟨α| d²α`. For `+1` the only nonzero band is
/// `⟨n|Ê|n+1⟩ = Γ(n + 3/2) / √(n! (n+1)!)`; `−1` gives the adjoint.
pub fn build_exp_phase_operator(
    sign: i32,
    dim: usize,
    construction: Construction<'_>,
) -> Result<OperatorMatrix> {
    let method = match sign {
        1 => Method::ExpPhasePlus,
        -1 => Method::ExpPhaseMinus,
        _ => {
            return Err(PhaseError::validation(
                "exponential phase sign must be +1 or -1",
            ))
        }
    };
    build(Kernel::Exp(sign), dim, construction, method)
}
