//! Polar-coordinate integration over the complex plane and phase marginals.

pub mod angular;
pub mod gauss;
mod grid;
mod marginal;

pub use grid::{
    build_polar_grid, build_polar_grid_with, default_angular_nodes, integrate_polar, PolarGrid,
    PolarNode, RadialRule, DEFAULT_RADIAL_NODES, MIN_ANGULAR_NODES,
};
pub(crate) use marginal::radial_factors;
pub use marginal::{
    moments_from_marginal, phase_marginal, MomentRule, PhaseDistribution, MAX_NORM_DEFECT,
};
