use num_complex::Complex64;
use serde::Serialize;

use crate::format::round_sig;
use crate::matrix::CMatrix;
use crate::operator::OperatorMatrix;
use crate::{PhaseError, Result};

/// Largest accepted `max |φ̂(t) − U φ̂ U†|`.
pub const SANDWICH_TOLERANCE: f64 = 1e-12;
/// Largest accepted finite-difference derivative mismatch.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;

/// Free oscillator `H = ω n̂` evolved for time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    omega: f64,
    t: f64,
}

impl EvolutionConfig {
    pub fn new(omega: f64, t: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(PhaseError::validation(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !t.is_finite() {
            return Err(PhaseError::validation(format!(
                "time must be finite, got {t}"
            )));
        }
        Ok(EvolutionConfig { omega, t })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Heisenberg-picture `e^{iωt n̂} φ̂ e^{−iωt n̂}`, applied entrywise as
/// `⟨m|φ̂(t)|n⟩ = e^{iωt(m−n)} ⟨m|φ̂|n⟩`.
pub fn evolve_phase_operator(op: &OperatorMatrix, config: EvolutionConfig) -> OperatorMatrix {
    let phase = config.omega * config.t;
    let entries = CMatrix::from_fn(op.dim(), |m, n| {
        op.entries[(m, n)] * Complex64::from_polar(1.0, phase * (m as f64 - n as f64))
    });
    let mut meta = op.meta.clone();
    meta.set("omega", config.omega);
    meta.set("t", config.t);
    OperatorMatrix::new(entries, op.method, meta)
}

fn sig<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v))
}

/// Consistency of the entrywise evolution with the unitary sandwich and
/// with the Heisenberg equation `dφ̂/dt = iω[n̂, φ̂]`.
#[derive(Clone, Debug, Serialize)]
pub struct EquationOfMotionReport {
    pub dim: usize,
    #[serde(serialize_with = "sig")]
    pub omega: f64,
    #[serde(serialize_with = "sig")]
    pub t: f64,
    /// `max |φ̂(t) − U φ̂ U†|` with `U = e^{iωt n̂}` multiplied out densely.
    #[serde(serialize_with = "sig")]
    pub sandwich_deviation: f64,
    /// `max |(φ̂(t+h) − φ̂(t−h))/2h − iω[n̂, φ̂(t)]|`.
    #[serde(serialize_with = "sig")]
    pub derivative_deviation: f64,
    #[serde(serialize_with = "sig")]
    pub step: f64,
    pub pass: bool,
}

/// Checks the evolved operator at `config.t()` by dense matrix products and
/// a central difference of step `step`.
pub fn check_equation_of_motion(
    op: &OperatorMatrix,
    config: EvolutionConfig,
    step: f64,
) -> Result<EquationOfMotionReport> {
    if !(step.is_finite() && step > 0.0) {
        return Err(PhaseError::validation(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let dim = op.dim();
    let (omega, t) = (config.omega, config.t);
    let evolved = evolve_phase_operator(op, config).entries;

    let u = CMatrix::from_fn(dim, |m, n| {
        if m == n {
            Complex64::from_polar(1.0, omega * t * m as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sandwich = u.matmul(&op.entries).matmul(&u.adjoint());
    let sandwich_deviation = (&evolved - &sandwich).max_abs();

    let plus = evolve_phase_operator(op, EvolutionConfig::new(omega, t + step)?).entries;
    let minus = evolve_phase_operator(op, EvolutionConfig::new(omega, t - step)?).entries;
    let derivative = (&plus - &minus).scale(Complex64::new(0.5 / step, 0.0));
    let number = CMatrix::from_fn(dim, |m, n| {
        if m == n {
            Complex64::new(m as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let commutator = &number.matmul(&evolved) - &evolved.matmul(&number);
    let heisenberg = commutator.scale(Complex64::new(0.0, omega));
    let derivative_deviation = (&derivative - &heisenberg).max_abs();

    Ok(EquationOfMotionReport {
        dim,
        omega,
        t,
        sandwich_deviation,
        derivative_deviation,
        step,
        pass: sandwich_deviation <= SANDWICH_TOLERANCE
            && derivative_deviation <= DERIVATIVE_TOLERANCE,
    })
}
