//! Additive decomposition of `G(alpha)^k |phi0>`.
//!
//! With `cos(theta) = 1 - lambda (1 - cos(alpha))` the k-step state collapses
//! to
//!
//! ```text
//! |phi_k> = [f_k G + f_{k-1} e^{i pi} I] |phi0>          (one kernel call)
//!         = [g_k I + h_k U(-alpha)] |phi0>                (one oracle call)
//! ```
//!
//! where `f_0 = 0`, `f_1 = 1`, `f_j = 2 cos(theta) f_{j-1} - f_{j-2}`,
//! `g_k = f_k f_2 - f_{k-1}` and `h_k = -f_k`. Neither reduced operator is
//! unitary in general; they only agree with `G^k` on `|phi0>`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::TOL;
use crate::linalg::{is_unitary, ComplexMatrix, ComplexVector, CHUNK};
use crate::operators::{
    apply_diffusion_in_place, check_dense_cap, dense_kernel_matrix, dense_oracle_matrix,
    evolve_from_uniform, initial_state, CountingOracle, TargetSet,
};
use crate::params::{check_lambda, theta_residual};

/// The coefficient sequence `f_0..=f_k` and the derived `g_k`, `h_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCoeffs {
    pub theta: f64,
    /// `f_0, ..., f_k`.
    pub f: Vec<f64>,
    pub g_k: f64,
    pub h_k: f64,
}

impl DecompositionCoeffs {
    pub fn k(&self) -> u32 {
        (self.f.len() - 1) as u32
    }

    pub fn f_k(&self) -> f64 {
        self.f[self.f.len() - 1]
    }

    /// `f_{k-1}`, continuing the recurrence backwards to `f_{-1} = -1` at `k = 0`.
    pub fn f_k_minus_1(&self) -> f64 {
        match self.f.len() {
            1 => -1.0,
            len => self.f[len - 2],
        }
    }
}

/// Run the recurrence up to `k`.
///
/// `g_k` and `h_k` are defined for every `k`; at `k = 0` the backward value
/// `f_{-1} = -1` gives `g_0 = 1`, `h_0 = 0` (the identity).
pub fn f_coefficients(theta: f64, k: u32) -> DecompositionCoeffs {
    let two_cos = 2.0 * theta.cos();
    let mut f = Vec::with_capacity(k as usize + 1);
    f.push(0.0);
    if k >= 1 {
        f.push(1.0);
    }
    for j in 2..=k as usize {
        f.push(two_cos * f[j - 1] - f[j - 2]);
    }
    let mut coeffs = DecompositionCoeffs {
        theta,
        f,
        g_k: 0.0,
        h_k: 0.0,
    };
    let f_k = coeffs.f_k();
    // f_2 = 2 cos(theta) whether or not the sequence reaches it.
    coeffs.g_k = f_k * two_cos - coeffs.f_k_minus_1();
    coeffs.h_k = -f_k;
    coeffs
}

fn warn_if_inconsistent(targets: &TargetSet, alpha: f64, theta: f64) {
    let residual = theta_residual(targets.lambda(), alpha, theta);
    if residual > TOL {
        log::warn!(
            "theta = {theta} is inconsistent with lambda = {}, alpha = {alpha} \
             (cos residual {residual:e}); the reduced state will not equal G^k |phi0>",
            targets.lambda()
        );
    }
}

/// `[f_k G(alpha) - f_{k-1} I] |phi0>` with a single kernel application.
pub fn reduced_state_i_with(
    oracle: &mut CountingOracle<'_>,
    alpha: f64,
    theta: f64,
    k: u32,
) -> Result<ComplexVector> {
    let targets = oracle.targets().clone();
    warn_if_inconsistent(&targets, alpha, theta);
    let coeffs = f_coefficients(theta, k);
    let mut state = initial_state(targets.n())?;
    oracle.apply_in_place(&mut state, alpha)?;
    apply_diffusion_in_place(&mut state, alpha)?;
    let f_k = coeffs.f_k();
    let uniform = coeffs.f_k_minus_1() / (targets.dim() as f64).sqrt();
    state.as_mut_slice().par_chunks_mut(CHUNK).for_each(|chunk| {
        for x in chunk {
            *x = f_k * *x - uniform;
        }
    });
    Ok(state)
}

pub fn reduced_state_i(targets: &TargetSet, alpha: f64, theta: f64, k: u32) -> Result<ComplexVector> {
    reduced_state_i_with(&mut CountingOracle::new(targets), alpha, theta, k)
}

/// `[g_k I + h_k U(-alpha)] |phi0>`: one oracle call and no diffusion.
pub fn reduced_state_ii_with(
    oracle: &mut CountingOracle<'_>,
    alpha: f64,
    theta: f64,
    k: u32,
) -> Result<ComplexVector> {
    let targets = oracle.targets().clone();
    warn_if_inconsistent(&targets, alpha, theta);
    let coeffs = f_coefficients(theta, k);
    let mut state = initial_state(targets.n())?;
    oracle.apply_in_place(&mut state, -alpha)?;
    let g = coeffs.g_k / (targets.dim() as f64).sqrt();
    let h = coeffs.h_k;
    state.as_mut_slice().par_chunks_mut(CHUNK).for_each(|chunk| {
        for x in chunk {
            *x = h * *x + g;
        }
    });
    Ok(state)
}

pub fn reduced_state_ii(targets: &TargetSet, alpha: f64, theta: f64, k: u32) -> Result<ComplexVector> {
    reduced_state_ii_with(&mut CountingOracle::new(targets), alpha, theta, k)
}

/// One row of the explicit k = 1..=6 decompositions. Each coefficient is a sum
/// of phases `e^{i m theta}` over the listed multiples `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepwiseExpansion {
    pub k: u32,
    /// Multiples of theta in the coefficient of `G(alpha)`.
    pub kernel_terms: Vec<i32>,
    /// Multiples of theta in the coefficient of `I`, before the `e^{i pi}` factor.
    pub identity_terms: Vec<i32>,
    /// Whether the identity coefficient carries the overall `e^{i pi}`.
    pub identity_has_pi: bool,
}

impl StepwiseExpansion {
    /// Numeric coefficients `(kernel, identity)`, with `e^{i pi}` evaluated as -1.
    pub fn evaluate(&self, theta: f64) -> (Complex64, Complex64) {
        let sum = |terms: &[i32]| -> Complex64 {
            terms
                .iter()
                .map(|&m| Complex64::from_polar(1.0, m as f64 * theta))
                .sum()
        };
        let sign = if self.identity_has_pi { -1.0 } else { 1.0 };
        (sum(&self.kernel_terms), sign * sum(&self.identity_terms))
    }

    /// True when the tabulated sums equal `f_k` and `-f_{k-1}` within `tol`.
    pub fn matches_recurrence(&self, theta: f64, tol: f64) -> bool {
        let coeffs = f_coefficients(theta, self.k);
        let (kernel, identity) = self.evaluate(theta);
        (kernel - coeffs.f_k()).norm() <= tol && (identity + coeffs.f_k_minus_1()).norm() <= tol
    }
}

/// The explicit decomposition table for `1 <= k <= 6`.
///
/// `k = 1` is given in the kernel/identity form (`G` alone), not the adjoint
/// form.
pub fn stepwise_expansion(k: u32) -> Result<StepwiseExpansion> {
    let (kernel, identity): (&[i32], &[i32]) = match k {
        1 => (&[0], &[]),
        2 => (&[1, -1], &[0]),
        3 => (&[2, -2, 0], &[1, -1]),
        4 => (&[3, -3, 1, -1], &[2, -2, 0]),
        5 => (&[4, -4, 2, -2, 0], &[3, -3, 1, -1]),
        6 => (&[5, -5, 3, -3, 1, -1], &[4, -4, 2, -2, 0]),
        _ => return Err(Error::NoExpansion(k)),
    };
    let expansion = StepwiseExpansion {
        k,
        kernel_terms: kernel.to_vec(),
        identity_terms: identity.to_vec(),
        identity_has_pi: !identity.is_empty(),
    };
    debug_assert!(expansion.matches_recurrence(0.37, 1e-12));
    Ok(expansion)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Even: `e^{ik theta}|phi_k> + e^{-ik theta}|phi_k> - |phi0>`, equal to
/// `|phi_{2k}>`. Odd: the same with `|phi_{k+1}>` and `|phi_1>`, equal to
/// `|phi_{2k+1}>`. The component states come from direct iteration.
pub fn even_odd_split(
    targets: &TargetSet,
    alpha: f64,
    theta: f64,
    k: u32,
    parity: Parity,
) -> Result<ComplexVector> {
    let (main, tail) = match parity {
        Parity::Even => (k, 0),
        Parity::Odd => (k + 1, 1),
    };
    let phi_main = evolve_from_uniform(targets, alpha, main)?;
    let phi_tail = evolve_from_uniform(targets, alpha, tail)?;
    let kt = k as f64 * theta;
    let mut out = phi_main.scaled(Complex64::from_polar(1.0, kt));
    out.axpy(Complex64::from_polar(1.0, -kt), &phi_main)?;
    out.axpy(Complex64::new(-1.0, 0.0), &phi_tail)?;
    Ok(out)
}

/// `|phi_total>` through the even/odd split of `total` iterations.
pub fn split_for_total(targets: &TargetSet, alpha: f64, theta: f64, total: u32) -> Result<ComplexVector> {
    if total.is_multiple_of(2) {
        even_odd_split(targets, alpha, theta, total / 2, Parity::Even)
    } else {
        even_odd_split(targets, alpha, theta, total / 2, Parity::Odd)
    }
}

/// Per-target and per-non-target amplitudes of `|phi_k>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub v_t: Complex64,
    pub v_nt: Complex64,
}

/// `v_t = [g_k + h_k e^{-i alpha}] / sqrt(N)`, `v_nt = [g_k + h_k] / sqrt(N)`.
pub fn target_amplitudes(
    lambda: f64,
    alpha: f64,
    theta: f64,
    k: u32,
    n_states: usize,
) -> Result<AmplitudePair> {
    check_lambda(lambda)?;
    let product = lambda * n_states as f64;
    if product < 1.0 - 1e-9 || (product - product.round()).abs() > 1e-9 {
        return Err(Error::NonIntegralM { product });
    }
    let coeffs = f_coefficients(theta, k);
    let scale = 1.0 / (n_states as f64).sqrt();
    let g = Complex64::new(coeffs.g_k, 0.0);
    Ok(AmplitudePair {
        v_t: (g + coeffs.h_k * Complex64::from_polar(1.0, -alpha)) * scale,
        v_nt: (g + coeffs.h_k) * scale,
    })
}

/// Dense `f_k G(alpha) - f_{k-1} I`.
pub fn reduced_operator_i_matrix(targets: &TargetSet, alpha: f64, theta: f64, k: u32) -> Result<ComplexMatrix> {
    check_dense_cap(targets.n())?;
    let coeffs = f_coefficients(theta, k);
    let g = dense_kernel_matrix(targets, alpha)?.scaled(Complex64::new(coeffs.f_k(), 0.0));
    let id = ComplexMatrix::identity(targets.dim()).scaled(Complex64::new(-coeffs.f_k_minus_1(), 0.0));
    g.add(&id)
}

/// Dense `g_k I + h_k U(-alpha)`.
pub fn reduced_operator_ii_matrix(targets: &TargetSet, alpha: f64, theta: f64, k: u32) -> Result<ComplexMatrix> {
    check_dense_cap(targets.n())?;
    let coeffs = f_coefficients(theta, k);
    let u = dense_oracle_matrix(targets, -alpha)?.scaled(Complex64::new(coeffs.h_k, 0.0));
    let id = ComplexMatrix::identity(targets.dim()).scaled(Complex64::new(coeffs.g_k, 0.0));
    u.add(&id)
}

/// Whether the one-kernel reduced operator is unitary (it is only for `N = 2`
/// or in degenerate cases such as `alpha = 0`).
pub fn check_reduced_operator_unitarity(targets: &TargetSet, alpha: f64, theta: f64, k: u32) -> Result<bool> {
    is_unitary(&reduced_operator_i_matrix(targets, alpha, theta, k)?, TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{rotation_phase, solve};
    use std::f64::consts::PI;

    fn alpha2() -> f64 {
        (-5.0 + 2.0 * 5f64.sqrt()).acos()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn v_t_closed() -> Complex64 {
        let s5 = 5f64.sqrt();
        c(2.0 * (s5 - 1.0), (5.0 * s5 - 11.0).sqrt() * (s5 + 1.0)) / 8f64.sqrt()
    }

    #[test]
    fn f_coefficient_examples() {
        assert_eq!(f_coefficients(0.9, 1).f, vec![0.0, 1.0]);
        assert_eq!(f_coefficients(0.0, 5).f, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let f = f_coefficients(PI / 5.0, 2);
        assert!((f.f_k() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(f.h_k, -f.f_k());
        // theta = 0: g_k + h_k = 2k - (k - 1) - k = 1.
        for k in 0..8 {
            let f = f_coefficients(0.0, k);
            assert_eq!(f.g_k + f.h_k, 1.0);
        }
        let f0 = f_coefficients(1.3, 0);
        assert_eq!((f0.g_k, f0.h_k), (1.0, 0.0));
    }

    #[test]
    fn recurrence_identity_holds() {
        for theta in [0.01, 0.5, 1.7, 3.0] {
            let f = f_coefficients(theta, 50).f;
            for j in 2..=50 {
                let lhs = f[j - 1] * f[j - 1] - f[j] * f[j - 2];
                assert!((lhs - 1.0).abs() < 1e-9, "theta {theta} j {j}: {lhs}");
            }
        }
    }

    #[test]
    fn reduced_state_i_reproduces_exact_search() {
        let t = TargetSet::single(3, 0).unwrap();
        let out = reduced_state_i(&t, alpha2(), PI / 5.0, 2).unwrap();
        assert!((out[0] - v_t_closed()).norm() < 1e-14);
        assert!((1..8).all(|i| out[i].norm() < 1e-14));
        let uniform = initial_state(3).unwrap();
        for k in 0..5 {
            let out = reduced_state_i(&t, 0.0, 0.0, k).unwrap();
            assert!(out.max_abs_diff(&uniform).unwrap() < 1e-14);
        }
    }

    #[test]
    fn reduced_state_ii_closed_form_entries() {
        let t = TargetSet::single(3, 0).unwrap();
        let (a, th) = (alpha2(), PI / 5.0);
        let out = reduced_state_ii(&t, a, th, 2).unwrap();
        let ct = th.cos();
        let r8 = 8f64.sqrt();
        let first = (4.0 * ct * ct - 2.0 * ct * Complex64::from_polar(1.0, -a) - 1.0) / r8;
        let rest = (4.0 * ct * ct - 2.0 * ct - 1.0) / r8;
        assert!((out[0] - first).norm() < 1e-15);
        assert!((1..8).all(|i| (out[i] - rest).norm() < 1e-15));
        assert!((out[0] - v_t_closed()).norm() < 1e-14);
        let uniform = initial_state(3).unwrap();
        for k in 0..5 {
            let out = reduced_state_ii(&t, 0.0, 0.0, k).unwrap();
            assert!(out.max_abs_diff(&uniform).unwrap() < 1e-14);
        }
    }

    #[test]
    fn oracle_counts() {
        let t = TargetSet::new(4, vec![2, 9]).unwrap();
        let mut oracle = CountingOracle::new(&t);
        reduced_state_ii_with(&mut oracle, 1.0, 0.4, 7).unwrap();
        assert_eq!(oracle.calls(), 1);
        let mut oracle = CountingOracle::new(&t);
        reduced_state_i_with(&mut oracle, 1.0, 0.4, 7).unwrap();
        assert_eq!(oracle.calls(), 1);
    }

    #[test]
    fn stepwise_tables() {
        let e2 = stepwise_expansion(2).unwrap();
        assert_eq!((e2.kernel_terms.clone(), e2.identity_terms.clone()), (vec![1, -1], vec![0]));
        assert!(e2.identity_has_pi);
        let e3 = stepwise_expansion(3).unwrap();
        assert_eq!(e3.kernel_terms, vec![2, -2, 0]);
        assert_eq!(e3.identity_terms, vec![1, -1]);
        let e6 = stepwise_expansion(6).unwrap();
        assert_eq!(e6.kernel_terms, vec![5, -5, 3, -3, 1, -1]);
        assert_eq!(e6.identity_terms, vec![4, -4, 2, -2, 0]);
        for k in 1..=6 {
            let e = stepwise_expansion(k).unwrap();
            for theta in [0.0, 0.3, PI / 5.0, 2.9] {
                assert!(e.matches_recurrence(theta, 1e-12), "k {k} theta {theta}");
            }
        }
        assert_eq!(stepwise_expansion(0), Err(Error::NoExpansion(0)));
        assert_eq!(stepwise_expansion(7), Err(Error::NoExpansion(7)));
    }

    #[test]
    fn split_examples() {
        let t = TargetSet::new(3, vec![0, 5]).unwrap();
        let a = 1.9;
        let th = rotation_phase(t.lambda(), a).unwrap();
        let phi = |k| evolve_from_uniform(&t, a, k).unwrap();
        let even = even_odd_split(&t, a, th, 1, Parity::Even).unwrap();
        assert!(even.max_abs_diff(&phi(2)).unwrap() < 1e-13);
        let odd = even_odd_split(&t, a, th, 1, Parity::Odd).unwrap();
        assert!(odd.max_abs_diff(&phi(3)).unwrap() < 1e-13);
        assert!((odd.norm() - 1.0).abs() < 1e-13);
        for total in 0..9 {
            let s = split_for_total(&t, a, th, total).unwrap();
            assert!(s.max_abs_diff(&phi(total)).unwrap() < 1e-12, "total {total}");
        }
    }

    #[test]
    fn target_amplitude_examples() {
        let p = solve(1.0 / 8.0).unwrap();
        let amps = target_amplitudes(p.lambda, p.alpha, p.theta, p.k, 8).unwrap();
        assert!((amps.v_t.norm_sqr() - 1.0).abs() < 1e-14);
        assert!(amps.v_nt.norm() < 1e-14);
        assert!((amps.v_t - v_t_closed()).norm() < 1e-14);
        assert!(matches!(
            target_amplitudes(0.3, 1.0, 0.5, 2, 8),
            Err(Error::NonIntegralM { .. })
        ));
    }

    #[test]
    fn reduced_operator_unitarity_boundary() {
        let p = solve(0.5).unwrap();
        let t1 = TargetSet::single(1, 0).unwrap();
        assert!(check_reduced_operator_unitarity(&t1, p.alpha, p.theta, p.k).unwrap());
        let p = solve(1.0 / 8.0).unwrap();
        let t3 = TargetSet::single(3, 0).unwrap();
        assert!(!check_reduced_operator_unitarity(&t3, p.alpha, p.theta, p.k).unwrap());
        for k in 0..4 {
            assert!(check_reduced_operator_unitarity(&t3, 0.0, 0.0, k).unwrap());
        }
        // The one-oracle form is not unitary even for N = 2.
        let p = solve(0.5).unwrap();
        let m = reduced_operator_ii_matrix(&t1, p.alpha, p.theta, p.k).unwrap();
        assert!(!is_unitary(&m, TOL).unwrap());
    }
}
