//! Numerical tolerances and size caps.

use std::sync::OnceLock;

/// Absolute max-abs-entry tolerance for unitarity and equality checks.
pub const TOL: f64 = 1e-10;

/// A Gram-Schmidt residual (relative to the seed norm) below this rejects the seed.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Slack allowed outside [-1, 1] before an arccos argument is rejected.
pub const ACOS_CLAMP: f64 = 1e-12;

/// Environment variable overriding [`Limits::max_state_n`].
pub const MAX_N_ENV: &str = "GROVER_DECOMP_MAX_N";

/// Qubit-count caps for the matrix-free and dense code paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest n for which a full state vector is allocated.
    pub max_state_n: u32,
    /// Largest n for which an N x N dense matrix is assembled.
    pub max_dense_n: u32,
    /// Largest n for which the N^2 x N^2 parallel operator is assembled.
    pub max_parallel_n: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_state_n: 26,
            max_dense_n: 12,
            max_parallel_n: 6,
        }
    }
}

impl Limits {
    /// Defaults, with `max_state_n` taken from `GROVER_DECOMP_MAX_N` when set.
    /// Dense caps never exceed the state cap.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            limits.max_state_n = n.min(62);
            limits.max_dense_n = limits.max_dense_n.min(limits.max_state_n);
            limits.max_parallel_n = limits.max_parallel_n.min(limits.max_state_n);
        }
        limits
    }
}

/// Process-wide limits, read from the environment once.
pub fn limits() -> Limits {
    static LIMITS: OnceLock<Limits> = OnceLock::new();
    *LIMITS.get_or_init(Limits::from_env)
}
