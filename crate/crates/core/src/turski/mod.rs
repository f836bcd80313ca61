//! Coherent-state phase operator: `φ̂ = (1/π) ∫ θ |α⟩⟨α| d²α` on a
//! truncated Fock space, its moment and exponential variants, and the
//! phase moments they produce.

mod construct;
mod dynamics;
mod moments;

pub use construct::{
    build_exp_phase_operator, build_moment_operator, build_phase_operator_analytic,
    build_phase_operator_quadrature, Construction, MAX_QUADRATURE_DEFECT,
};
pub use dynamics::{
    check_equation_of_motion, evolve_phase_operator, EquationOfMotionReport, EvolutionConfig,
    DERIVATIVE_TOLERANCE, SANDWICH_TOLERANCE,
};
pub use moments::{
    acid_test, operator_expectation_moments, phase_moments_q, unitarity_defect, AcidTestReport,
    UnitarityReport, ACID_TEST_TOLERANCE,
};
