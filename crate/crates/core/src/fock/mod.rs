//! Truncated Fock-space states, ladder operators, coherent overlaps and the
//! Husimi Q-function.

mod operators;
mod state;

pub(crate) use operators::annihilation_real;
pub use operators::{displacement_matrix, elementary_operators, expm_real, ElementaryOperators};
pub use state::{
    coherent_amplitude, coherent_capture, coherent_overlap, min_coherent_dim, q_function,
    TruncatedState, COHERENT_CAPTURE_THRESHOLD, MAX_DIM,
};
