use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("seed {index} is degenerate: residual norm {residual:e} after projection")]
    DegenerateSeed { index: usize, residual: f64 },

    #[error("could only complete {found} of {needed} basis vectors")]
    IncompleteBasis { needed: usize, found: usize },

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("k = {k} is infeasible for lambda = {lambda}: arccos argument {argument} outside [-1, 1]")]
    InfeasibleK { lambda: f64, k: u32, argument: f64 },

    #[error("n = {n} exceeds the state-vector cap of {cap} qubits")]
    TooLarge { n: u32, cap: u32 },

    #[error("n = {n} exceeds the dense-matrix cap of {cap} qubits")]
    TooLargeForDense { n: u32, cap: u32 },

    #[error("invalid target set: {0}")]
    InvalidTargets(String),

    #[error("lambda * N = {product} is not an integer target count")]
    NonIntegralM { product: f64 },

    #[error("stepwise expansion is tabulated for k = 1..=6 only, got {0}")]
    NoExpansion(u32),
}

impl Error {
    /// True for errors raised by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::TooLargeForDense { .. })
    }
}
