use std::f64::consts::PI;

use serde::Serialize;

use super::build_exp_phase_operator;
use super::construct::{build_raw, Construction, Kernel};
use crate::fock::TruncatedState;
use crate::format::round_sig;
use crate::moments::{check_k_max, GridInfo, MomentMethod, MomentReport};
use crate::operator::Meta;
use crate::quadrature::{moments_from_marginal, phase_marginal, MomentRule, PolarGrid};
use crate::special::{ln_factorial, ln_gamma};
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

/// Largest accepted `|Δφ² − π²/3|` for a Fock state.
pub const ACID_TEST_TOLERANCE: f64 = 1e-6;

fn sig<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v))
}

fn sig_vec<S: serde::Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| round_sig(*x)))
}

/// Phase moments from the Husimi Q-function, `⟨θ^k⟩ = ∫ θ^k Q(α) d²α`.
pub fn phase_moments_q(
    state: &TruncatedState,
    grid: &PolarGrid,
    k_max: u32,
) -> Result<MomentReport> {
    check_k_max(k_max)?;
    let dist = phase_marginal(state, grid)?;
    let mut report = moments_from_marginal(&dist, k_max, MomentRule::Spectral)?;
    report.grid.dim = Some(state.dim());
    Ok(report)
}

/// Phase moments as expectation values `⟨ψ|φ̂^(k)|ψ⟩` of the closed-form
/// moment operators in dimension `dim` (the state's own dimension if
/// `None`).
///
/// The metadata also carries `⟨ψ|(φ̂^(1))²|ψ⟩`, the matrix square of the
/// first moment operator, and its gap to the second moment.
pub fn operator_expectation_moments(
    state: &TruncatedState,
    dim: Option<usize>,
    k_max: u32,
    window: PhaseWindow,
) -> Result<MomentReport> {
    check_k_max(k_max)?;
    let dim = dim.unwrap_or(state.dim());
    let state = state.embed(dim)?;
    let psi = state.amplitudes();
    let construction = Construction::Analytic(window);
    let mut centered = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let op = build_raw(Kernel::CenteredPower(k), dim, construction)?;
        centered.push(op.expectation(psi).re);
    }
    let first = build_raw(Kernel::Power(1), dim, construction)?;
    let image = first.apply(psi);
    let square: f64 = image.iter().map(|z| z.norm_sqr()).sum();
    let grid = GridInfo {
        dim: Some(dim),
        theta0: window.center(),
        ..GridInfo::default()
    };
    let mut report = MomentReport::from_centered(
        MomentMethod::OperatorExpectation,
        window.center(),
        centered,
        state.norm_defect(),
        grid,
        Meta::new(),
    );
    report.meta.set("matrix_square_second_moment", square);
    if k_max >= 2 {
        report.meta.set("square_gap", report.second_moment - square);
    }
    Ok(report)
}

/// Outcome of the Fock-state phase-variance check.
#[derive(Clone, Debug, Serialize)]
pub struct AcidTestReport {
    pub n: usize,
    pub dim: usize,
    #[serde(serialize_with = "sig")]
    pub variance: f64,
    #[serde(serialize_with = "sig")]
    pub expected: f64,
    #[serde(serialize_with = "sig")]
    pub deviation: f64,
    #[serde(serialize_with = "sig")]
    pub tolerance: f64,
    pub pass: bool,
    pub report: MomentReport,
}

/// Q-function phase variance of `|n⟩` against the uniform value `π²/3`.
pub fn acid_test(n: usize, dim: usize, grid: &PolarGrid) -> Result<AcidTestReport> {
    let state = TruncatedState::fock(n, dim)?;
    let report = phase_moments_q(&state, grid, 2)?;
    let expected = PI * PI / 3.0;
    let deviation = (report.variance - expected).abs();
    Ok(AcidTestReport {
        n,
        dim,
        variance: report.variance,
        expected,
        deviation,
        tolerance: ACID_TEST_TOLERANCE,
        pass: deviation <= ACID_TEST_TOLERANCE,
        report,
    })
}

/// Diagonals of `Ê†Ê` and `ÊÊ†` and their distance from the identity.
#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub dim: usize,
    pub construction: &'static str,
    #[serde(serialize_with = "sig_vec")]
    pub edag_e_diagonal: Vec<f64>,
    #[serde(serialize_with = "sig_vec")]
    pub e_edag_diagonal: Vec<f64>,
    /// `Γ(n + 3/2)² / (n! (n+1)!)` for `n < dim − 1`.
    #[serde(serialize_with = "sig_vec")]
    pub closed_form: Vec<f64>,
    /// `max |Ê†Ê − 1|` over the full matrix.
    #[serde(serialize_with = "sig")]
    pub edag_e_defect: f64,
    /// `max |ÊÊ† − 1|` over the full matrix.
    #[serde(serialize_with = "sig")]
    pub e_edag_defect: f64,
    /// Largest off-diagonal magnitude in either product.
    #[serde(serialize_with = "sig")]
    pub off_diagonal: f64,
    /// Largest deviation of the computed diagonals from the closed form.
    #[serde(serialize_with = "sig")]
    pub closed_form_deviation: f64,
    pub note: String,
}

/// Non-unitarity of the exponential phase operator on the truncated space.
pub fn unitarity_defect(dim: usize, construction: Construction<'_>) -> Result<UnitarityReport> {
    if dim < 2 {
        return Err(PhaseError::dimension(
            "unitarity check needs dimension >= 2",
        ));
    }
    let e = build_exp_phase_operator(1, dim, construction)?.entries;
    let ed = e.adjoint();
    let ede = ed.matmul(&e);
    let eed = e.matmul(&ed);
    let closed_form: Vec<f64> = (0..dim - 1)
        .map(|n| (2.0 * ln_gamma(n as f64 + 1.5) - ln_factorial(n) - ln_factorial(n + 1)).exp())
        .collect();
    let diag = |m: &crate::matrix::CMatrix| (0..dim).map(|i| m[(i, i)].re).collect::<Vec<f64>>();
    let edag_e_diagonal = diag(&ede);
    let e_edag_diagonal = diag(&eed);
    let identity_defect = |m: &crate::matrix::CMatrix| {
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((m[(i, j)] - target).norm());
            }
        }
        worst
    };
    let mut off_diagonal: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                off_diagonal = off_diagonal.max(ede[(i, j)].norm()).max(eed[(i, j)].norm());
            }
        }
    }
    let mut closed_form_deviation: f64 =
        edag_e_diagonal[0].abs().max(e_edag_diagonal[dim - 1].abs());
    for n in 0..dim - 1 {
        closed_form_deviation = closed_form_deviation
            .max((edag_e_diagonal[n + 1] - closed_form[n]).abs())
            .max((e_edag_diagonal[n] - closed_form[n]).abs());
    }
    let note = format!(
        "E†E and EE† are diagonal but not the identity, so the exponential phase operator is \
         not unitary on the truncated space: (E†E)_00 = {}, (EE†)_00 = {}, defects {} and {}",
        crate::format::fmt_sig(edag_e_diagonal[0]),
        crate::format::fmt_sig(e_edag_diagonal[0]),
        crate::format::fmt_sig(identity_defect(&ede)),
        crate::format::fmt_sig(identity_defect(&eed)),
    );
    Ok(UnitarityReport {
        dim,
        note,
        construction: construction.label(),
        edag_e_defect: identity_defect(&ede),
        e_edag_defect: identity_defect(&eed),
        edag_e_diagonal,
        e_edag_diagonal,
        closed_form,
        off_diagonal,
        closed_form_deviation,
    })
}
