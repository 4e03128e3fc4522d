//! The phase-matched oracle `U(alpha)`, diffusion `W(-alpha)` and kernel
//! `G(alpha) = W(-alpha) U(alpha)`.
//!
//! State application is matrix-free: the oracle touches only the `M` target
//! entries and the diffusion is a rank-one update about the uniform state
//! `|phi0>`, costing one inner product and one scaled add. Dense matrices are
//! assembled only for verification.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::limits;
use crate::linalg::{chunked_sum, ComplexMatrix, ComplexVector, CHUNK};
use crate::params::{check_lambda, rotation_phase};

/// Hard ceiling on the qubit count regardless of configured caps.
const MAX_QUBITS: u32 = 62;

/// Marked basis states of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSet {
    n: u32,
    indices: Vec<usize>,
}

impl TargetSet {
    /// `indices` must be strictly increasing, non-empty and below `2^n`.
    pub fn new(n: u32, indices: Vec<usize>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidTargets(format!(
                "qubit count {n} must be in 1..={MAX_QUBITS}"
            )));
        }
        let dim = 1usize << n;
        if indices.is_empty() {
            return Err(Error::InvalidTargets("no targets given".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTargets(
                "indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::InvalidTargets(format!(
                    "index {last} out of range for N = {dim}"
                )));
            }
        }
        Ok(TargetSet { n, indices })
    }

    /// Like [`TargetSet::new`] but sorts and removes duplicates first.
    pub fn from_unsorted(n: u32, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(n, indices)
    }

    /// The first `m` basis states `|0>, ..., |m-1>`.
    pub fn prefix(n: u32, m: usize) -> Result<Self> {
        Self::new(n, (0..m).collect())
    }

    pub fn single(n: u32, index: usize) -> Result<Self> {
        Self::new(n, vec![index])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N = 2^n`.
    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `M`.
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    /// `lambda = M / N`.
    pub fn lambda(&self) -> f64 {
        self.count() as f64 / self.dim() as f64
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Smallest index that is not a target, if any.
    pub fn first_non_target(&self) -> Option<usize> {
        (0..self.dim()).find(|i| !self.contains(*i))
    }

    fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.dim()];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }
}

/// Oracle bound to a target set that counts its own applications.
///
/// Each counting scope owns its oracle, so counts never leak between calls.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    targets: &'a TargetSet,
    calls: usize,
}

impl<'a> CountingOracle<'a> {
    pub fn new(targets: &'a TargetSet) -> Self {
        CountingOracle { targets, calls: 0 }
    }

    pub fn targets(&self) -> &TargetSet {
        self.targets
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Apply `U(alpha)` in place.
    pub fn apply_in_place(&mut self, state: &mut ComplexVector, alpha: f64) -> Result<()> {
        check_state(state, self.targets)?;
        let phase = Complex64::from_polar(1.0, alpha);
        let amps = state.as_mut_slice();
        for &t in self.targets.indices() {
            amps[t] *= phase;
        }
        self.calls += 1;
        Ok(())
    }
}

fn check_state(state: &ComplexVector, targets: &TargetSet) -> Result<()> {
    if state.dim() != targets.dim() {
        return Err(Error::DimensionMismatch {
            expected: targets.dim(),
            found: state.dim(),
        });
    }
    Ok(())
}

pub(crate) fn check_state_cap(n: u32) -> Result<()> {
    let cap = limits().max_state_n;
    if n > cap || n > MAX_QUBITS {
        return Err(Error::TooLarge { n, cap });
    }
    Ok(())
}

pub(crate) fn check_dense_cap(n: u32) -> Result<()> {
    let cap = limits().max_dense_n;
    if n > cap {
        return Err(Error::TooLargeForDense { n, cap });
    }
    Ok(())
}

/// The uniform superposition `|phi0>` on `n` qubits.
pub fn initial_state(n: u32) -> Result<ComplexVector> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            expected: "n >= 1",
        });
    }
    check_state_cap(n)?;
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(ComplexVector::new(vec![amp; dim]))
}

/// `U(alpha)|state>`: target amplitudes pick up `e^{i alpha}`.
pub fn apply_oracle(state: &ComplexVector, targets: &TargetSet, alpha: f64) -> Result<ComplexVector> {
    let mut out = state.clone();
    CountingOracle::new(targets).apply_in_place(&mut out, alpha)?;
    Ok(out)
}

/// `W(-alpha)` in place: `e^{-i alpha} x + (1 - e^{-i alpha}) <phi0|x> |phi0>`.
pub fn apply_diffusion_in_place(state: &mut ComplexVector, alpha: f64) -> Result<()> {
    let dim = state.dim();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two().max(2),
            found: dim,
        });
    }
    let total = chunked_sum(state.as_slice(), |c| c.iter().sum());
    // <phi0|x> |phi0> has every entry equal to total / N.
    let shift = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha)) * total / dim as f64;
    let rot = Complex64::from_polar(1.0, -alpha);
    state.as_mut_slice().par_chunks_mut(CHUNK).for_each(|chunk| {
        for x in chunk {
            *x = rot * *x + shift;
        }
    });
    Ok(())
}

pub fn apply_diffusion(state: &ComplexVector, alpha: f64) -> Result<ComplexVector> {
    let mut out = state.clone();
    apply_diffusion_in_place(&mut out, alpha)?;
    Ok(out)
}

/// Apply `G(alpha)` to `state` `k` times in place, counting oracle calls.
pub fn grover_iterate_in_place(
    oracle: &mut CountingOracle<'_>,
    state: &mut ComplexVector,
    alpha: f64,
    k: u32,
) -> Result<()> {
    check_state(state, oracle.targets())?;
    for _ in 0..k {
        oracle.apply_in_place(state, alpha)?;
        apply_diffusion_in_place(state, alpha)?;
    }
    Ok(())
}

/// `G(alpha)^k |state>`.
pub fn grover_iterate(
    state: &ComplexVector,
    targets: &TargetSet,
    alpha: f64,
    k: u32,
) -> Result<ComplexVector> {
    let mut out = state.clone();
    grover_iterate_in_place(&mut CountingOracle::new(targets), &mut out, alpha, k)?;
    Ok(out)
}

/// `|phi_k> = G(alpha)^k |phi0>`.
pub fn evolve_from_uniform(targets: &TargetSet, alpha: f64, k: u32) -> Result<ComplexVector> {
    let mut state = initial_state(targets.n())?;
    grover_iterate_in_place(&mut CountingOracle::new(targets), &mut state, alpha, k)?;
    Ok(state)
}

/// Dense `G(alpha) = W(-alpha) U(alpha)`; entry `(i, j)` is
/// `[e^{-i alpha} delta_ij + (1 - e^{-i alpha}) / N] u_j` with
/// `u_j = e^{i alpha}` on targets and `1` elsewhere.
pub fn dense_kernel_matrix(targets: &TargetSet, alpha: f64) -> Result<ComplexMatrix> {
    check_dense_cap(targets.n())?;
    let dim = targets.dim();
    let mask = targets.mask();
    let rot = Complex64::from_polar(1.0, -alpha);
    let off = (Complex64::new(1.0, 0.0) - rot) / dim as f64;
    let oracle_phase = Complex64::from_polar(1.0, alpha);
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let u = if mask[j] {
            oracle_phase
        } else {
            Complex64::new(1.0, 0.0)
        };
        let diag = if i == j { rot } else { Complex64::new(0.0, 0.0) };
        (diag + off) * u
    }))
}

/// Dense oracle `U(alpha)`.
pub fn dense_oracle_matrix(targets: &TargetSet, alpha: f64) -> Result<ComplexMatrix> {
    check_dense_cap(targets.n())?;
    let dim = targets.dim();
    let mut m = ComplexMatrix::identity(dim);
    for &t in targets.indices() {
        m.set(t, t, Complex64::from_polar(1.0, alpha));
    }
    Ok(m)
}

/// The kernel restricted to the invariant plane, in the basis `{|R>, |T>}`.
pub fn two_dim_kernel(lambda: f64, alpha: f64) -> Result<ComplexMatrix> {
    check_lambda(lambda)?;
    let one = Complex64::new(1.0, 0.0);
    let em = one - Complex64::from_polar(1.0, -alpha);
    let ep = one - Complex64::from_polar(1.0, alpha);
    let s = (lambda * (1.0 - lambda)).sqrt();
    ComplexMatrix::from_row_major(
        2,
        2,
        vec![one - em * lambda, -ep * s, em * s, one - ep * lambda],
    )
}

/// Eigenvalues `eps_pm = e^{+- i theta}` of the two-dimensional kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpectrum {
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
    pub theta: f64,
}

pub fn kernel_eigenvalues(lambda: f64, alpha: f64) -> Result<KernelSpectrum> {
    check_lambda(lambda)?;
    let x = lambda * (1.0 - alpha.cos());
    let re = 1.0 - x;
    let im = (x * (2.0 - x)).max(0.0).sqrt();
    Ok(KernelSpectrum {
        eps_plus: Complex64::new(re, im),
        eps_minus: Complex64::new(re, -im),
        theta: re.clamp(-1.0, 1.0).acos(),
    })
}

/// Success amplitude on `|T>` and failure amplitude on `|R>` after `k` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDimAmplitudes {
    pub d_k: Complex64,
    pub u_k: Complex64,
}

/// Closed-form `d_k`, `u_k` with `theta` from the rotation relation.
pub fn two_dim_amplitudes(lambda: f64, alpha: f64, k: u32) -> Result<TwoDimAmplitudes> {
    let theta = rotation_phase(lambda, alpha)?;
    let half = theta / 2.0;
    let kf = k as f64;
    if half.sin() < 1e-12 {
        // theta = 0 only when alpha = 0, where G is the identity.
        return Ok(TwoDimAmplitudes {
            d_k: Complex64::new(lambda.sqrt(), 0.0),
            u_k: Complex64::new((1.0 - lambda).sqrt(), 0.0),
        });
    }
    let one_plus = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -alpha);
    let d_k = lambda.sqrt() / half.sin()
        * (Complex64::new(((kf + 0.5) * theta).sin(), 0.0)
            - one_plus * (kf * theta).sin() / (2.0 * half.cos()));
    let u_k = (1.0 - lambda).sqrt() / half.cos() * ((kf + 0.5) * theta).cos();
    Ok(TwoDimAmplitudes {
        d_k,
        u_k: Complex64::new(u_k, 0.0),
    })
}

/// Probability of measuring any target in `state`.
pub fn success_probability(state: &ComplexVector, targets: &TargetSet) -> f64 {
    targets
        .indices()
        .iter()
        .map(|&t| state[t].norm_sqr())
        .sum()
}
