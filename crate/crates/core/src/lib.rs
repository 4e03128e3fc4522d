//! Phase-matched exact Grover search on a full state vector.
//!
//! The kernel `G = W(-alpha) U(alpha)` is simulated directly, and the
//! `k`-fold iterate is also reached through the two-term additive
//! decomposition (one oracle call), a shortcut unitary built from orthonormal
//! bases, and a two-channel tensor-product scheme.

pub mod decomposition;
pub mod error;
pub mod golden;
pub mod limits;
pub mod linalg;
pub mod operators;
pub mod parallel;
pub mod params;
pub mod report;
pub mod shortcut;
pub mod suites;

pub use decomposition::{
    even_odd_split, f_coefficients, reduced_state_i, reduced_state_ii, stepwise_expansion,
    target_amplitudes, AmplitudePair, DecompositionCoeffs, Parity,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, Kronecker};
pub use operators::{
    evolve_from_uniform, grover_iterate, initial_state, success_probability, CountingOracle,
    TargetSet,
};
pub use parallel::{build_parallel_operator, verify_decoupling, ParallelOperator};
pub use params::{exact_params, solve, SearchParams};
pub use report::{Check, VerificationReport};
pub use shortcut::{build_shortcut, iterative_matrix_power, verify_shortcut, ShortcutOperator};
