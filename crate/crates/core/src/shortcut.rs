//! The shortcut unitary `C = sum_i |phi_k^(i)><phi_0^(i)|`.
//!
//! The first pair maps `|phi0>` to the final search state, which is obtained
//! from a single oracle call through the one-oracle reduced form. The remaining
//! pairs complete both sides to orthonormal bases so that `C` is unitary:
//! the input side by Gram-Schmidt on `|omega_0>, ..., |omega_{N-2}>`, the
//! output side by the untouched computational basis vectors when the search
//! is exact with a single target, and by Gram-Schmidt otherwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decomposition::{reduced_state_ii_with, target_amplitudes};
use crate::error::{Error, Result};
use crate::limits::TOL;
use crate::linalg::{
    complete_with_canonical_seeds, gram_schmidt_complete, unitarity_residual, ComplexMatrix,
    ComplexVector,
};
use crate::operators::{check_dense_cap, dense_kernel_matrix, initial_state, CountingOracle, TargetSet};
use crate::params::SearchParams;
use crate::report::{Check, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ShortcutWarning {
    /// The final state has weight off the targets, so the output basis was
    /// completed by Gram-Schmidt instead of the computational basis.
    NonExactParams { max_non_target: f64 },
}

#[derive(Debug, Clone)]
pub struct ShortcutOperator {
    pub matrix: ComplexMatrix,
    pub params: SearchParams,
    pub targets: TargetSet,
    /// `|phi_0^(i)>`, starting with `|phi0>`.
    pub basis_in: Vec<ComplexVector>,
    /// `|phi_k^(i)>`, starting with the final search state.
    pub basis_out: Vec<ComplexVector>,
    /// Oracle applications spent building the operator.
    pub oracle_calls: usize,
    pub warnings: Vec<ShortcutWarning>,
}

impl ShortcutOperator {
    /// The final search state `|phi_k>`.
    pub fn final_state(&self) -> &ComplexVector {
        &self.basis_out[0]
    }
}

fn check_params_match(targets: &TargetSet, params: &SearchParams) -> Result<()> {
    if (targets.lambda() - params.lambda).abs() > 1e-12 {
        return Err(Error::InvalidTargets(format!(
            "target set has lambda = {} but parameters were solved for {}",
            targets.lambda(),
            params.lambda
        )));
    }
    Ok(())
}

/// Build `C` for `targets` from the exact-search `params`.
pub fn build_shortcut(targets: &TargetSet, params: &SearchParams) -> Result<ShortcutOperator> {
    check_dense_cap(targets.n())?;
    check_params_match(targets, params)?;
    let dim = targets.dim();

    let phi0 = initial_state(targets.n())?;
    let seeds: Vec<ComplexVector> = (0..dim - 1).map(|i| ComplexVector::basis(dim, i)).collect();
    let basis_in = gram_schmidt_complete(&phi0, &seeds)?;

    let mut oracle = CountingOracle::new(targets);
    let phi_k = reduced_state_ii_with(&mut oracle, params.alpha, params.theta, params.k)?;

    let max_non_target = (0..dim)
        .filter(|i| !targets.contains(*i))
        .map(|i| phi_k[i].norm())
        .fold(0.0, f64::max);
    let exact = max_non_target <= TOL;

    let mut warnings = Vec::new();
    let basis_out = if exact && targets.count() == 1 {
        let t = targets.indices()[0];
        let mut basis = Vec::with_capacity(dim);
        basis.push(phi_k);
        basis.extend((0..dim).filter(|&j| j != t).map(|j| ComplexVector::basis(dim, j)));
        basis
    } else {
        if !exact {
            log::warn!(
                "final state has non-target amplitude {max_non_target:e}; \
                 completing the output basis by Gram-Schmidt"
            );
            warnings.push(ShortcutWarning::NonExactParams { max_non_target });
        }
        complete_with_canonical_seeds(&phi_k.normalized())?
    };

    let matrix = ComplexMatrix::sum_of_outer_products(&basis_out, &basis_in)?;
    Ok(ShortcutOperator {
        matrix,
        params: *params,
        targets: targets.clone(),
        basis_in,
        basis_out,
        oracle_calls: oracle.calls(),
        warnings,
    })
}

/// Dense `G(alpha)^k` by repeated multiplication.
pub fn iterative_matrix_power(targets: &TargetSet, alpha: f64, k: u32) -> Result<ComplexMatrix> {
    dense_kernel_matrix(targets, alpha)?.pow(k)
}

fn row_sum(m: &ComplexMatrix, r: usize) -> Complex64 {
    m.row(r).iter().sum()
}

/// Compare the shortcut with the iterated kernel `g_pow`.
///
/// Checks, by name:
/// - `target_rows_equal`: target rows of `C` and `G^k` agree (single target);
/// - `non_target_row_sums_zero`: every other row of both sums to zero;
/// - `target_row_sums`: target rows of both sum to `sqrt(N) v_t`;
/// - `shortcut_unitary`, `power_unitary`;
/// - `same_final_state`: `C|phi0> = G^k|phi0>`.
pub fn verify_shortcut(c: &ShortcutOperator, g_pow: &ComplexMatrix) -> Result<VerificationReport> {
    let m = &c.matrix;
    if m.rows() != g_pow.rows() || m.cols() != g_pow.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: g_pow.rows(),
        });
    }
    let dim = m.rows();
    let targets = &c.targets;
    let mut report = VerificationReport::default();

    let mut rows_equal: f64 = 0.0;
    for &t in targets.indices() {
        for (a, b) in m.row(t).iter().zip(g_pow.row(t)) {
            rows_equal = rows_equal.max((a - b).norm());
        }
    }
    report.push(Check::within("target_rows_equal", rows_equal, TOL));

    let mut non_target_sums: f64 = 0.0;
    for r in (0..dim).filter(|r| !targets.contains(*r)) {
        non_target_sums = non_target_sums
            .max(row_sum(m, r).norm())
            .max(row_sum(g_pow, r).norm());
    }
    report.push(Check::within("non_target_row_sums_zero", non_target_sums, TOL));

    let p = &c.params;
    let v_t = target_amplitudes(p.lambda, p.alpha, p.theta, p.k, dim)?.v_t;
    let expected = v_t * (dim as f64).sqrt();
    let mut target_sums: f64 = 0.0;
    for &t in targets.indices() {
        target_sums = target_sums
            .max((row_sum(m, t) - expected).norm())
            .max((row_sum(g_pow, t) - expected).norm());
    }
    report.push(Check::within("target_row_sums", target_sums, TOL));

    report.push(Check::within("shortcut_unitary", unitarity_residual(m)?, TOL));
    report.push(Check::within("power_unitary", unitarity_residual(g_pow)?, TOL));

    let phi0 = initial_state(targets.n())?;
    let diff = m.apply(&phi0)?.max_abs_diff(&g_pow.apply(&phi0)?)?;
    report.push(Check::within("same_final_state", diff, TOL));
    Ok(report)
}
