//! Quantum phase on truncated Fock spaces.
//!
//! The central object is the coherent-state phase operator
//! `φ̂ = (1/π) ∫ arg(α) |α⟩⟨α| d²α`, built both by polar quadrature and in
//! closed form, together with its moment and exponential variants, Husimi
//! Q-function phase moments, a displacement-sandwiched logarithm-series
//! construction, and the Pegg-Barnett formalism as a baseline.

pub mod cli;
pub mod error;
pub mod export;
pub mod fock;
pub mod format;
pub mod logseries;
pub mod matrix;
pub mod moments;
pub mod operator;
pub mod pegg_barnett;
pub mod quadrature;
pub mod special;
pub mod statespec;
pub mod turski;
pub mod window;

pub use error::{PhaseError, Result};
pub use moments::{MomentMethod, MomentReport};
pub use operator::{Meta, Method, OperatorMatrix};
pub use window::PhaseWindow;
