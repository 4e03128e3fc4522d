//! Two-channel operator on the `N^2`-dimensional tensor space.
//!
//! Input `|phi0> (x) |phi_U>` with `|phi_U> = U(-alpha)|phi0>`, output
//! `|phi_k> (x) |chi>`. The operator is assembled as a sum over products of
//! four orthonormal sets and compared against its factorization into two
//! independent single-channel maps.

use num_complex::Complex64;

use crate::decomposition::f_coefficients;
use crate::error::{Error, Result};
use crate::limits::{limits, TOL};
use crate::linalg::{
    complete_with_canonical_seeds, orthonormality_residual, unitarity_residual, ComplexMatrix,
    ComplexVector, Kronecker,
};
use crate::operators::{check_dense_cap, initial_state, CountingOracle, TargetSet};
use crate::params::SearchParams;
use crate::report::{Check, VerificationReport};

/// The four orthonormal sets; each starts with its defining state.
#[derive(Debug, Clone)]
pub struct ChannelBases {
    pub phi0: Vec<ComplexVector>,
    pub phi_k: Vec<ComplexVector>,
    pub phi_u: Vec<ComplexVector>,
    pub chi: Vec<ComplexVector>,
}

impl ChannelBases {
    /// Worst orthonormality residual over the four sets.
    pub fn orthonormality_residual(&self) -> f64 {
        [&self.phi0, &self.phi_k, &self.phi_u, &self.chi]
            .into_iter()
            .map(|b| orthonormality_residual(b))
            .fold(0.0, f64::max)
    }
}

/// Channel bases plus the two `N x N` factor maps, without the `N^2` matrix.
#[derive(Debug, Clone)]
pub struct ParallelFactors {
    pub bases: ChannelBases,
    /// `sum_p |phi_k^(p)><phi_0^(p)|`.
    pub first: ComplexMatrix,
    /// `sum_q |chi^(q)><phi_U^(q)|`.
    pub second: ComplexMatrix,
    pub oracle_calls: usize,
}

impl ParallelFactors {
    /// Apply each factor to its own channel.
    pub fn apply(&self, a: &ComplexVector, b: &ComplexVector) -> Result<(ComplexVector, ComplexVector)> {
        Ok((self.first.apply(a)?, self.second.apply(b)?))
    }
}

/// Build the channel bases and factor maps. `chi` defaults to `|omega_0>`.
pub fn build_parallel_factors(
    targets: &TargetSet,
    params: &SearchParams,
    chi: Option<ComplexVector>,
) -> Result<ParallelFactors> {
    check_dense_cap(targets.n())?;
    let dim = targets.dim();
    let chi = chi.unwrap_or_else(|| ComplexVector::basis(dim, 0));
    if chi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: chi.dim(),
        });
    }

    let phi0 = initial_state(targets.n())?;
    let mut oracle = CountingOracle::new(targets);
    let mut phi_u = phi0.clone();
    oracle.apply_in_place(&mut phi_u, -params.alpha)?;

    // |phi_k> = g_k |phi0> + h_k |phi_U>
    let coeffs = f_coefficients(params.theta, params.k);
    let mut phi_k = phi0.scaled(Complex64::new(coeffs.g_k, 0.0));
    phi_k.axpy(Complex64::new(coeffs.h_k, 0.0), &phi_u)?;

    let bases = ChannelBases {
        phi0: complete_with_canonical_seeds(&phi0)?,
        phi_k: complete_with_canonical_seeds(&phi_k)?,
        phi_u: complete_with_canonical_seeds(&phi_u)?,
        chi: complete_with_canonical_seeds(&chi)?,
    };
    let first = ComplexMatrix::sum_of_outer_products(&bases.phi_k, &bases.phi0)?;
    let second = ComplexMatrix::sum_of_outer_products(&bases.chi, &bases.phi_u)?;
    Ok(ParallelFactors {
        bases,
        first,
        second,
        oracle_calls: oracle.calls(),
    })
}

#[derive(Debug, Clone)]
pub struct ParallelOperator {
    /// `sum_j |Psi_k^(j)><Psi_0^(j)|`, assembled term by term.
    pub matrix: ComplexMatrix,
    pub chi: ComplexVector,
    /// The single-channel maps `(first, second)`.
    pub factors: (ComplexMatrix, ComplexMatrix),
    pub bases: ChannelBases,
    pub oracle_calls: usize,
}

impl ParallelOperator {
    /// `|phi0> (x) |phi_U>`.
    pub fn input_state(&self) -> ComplexVector {
        self.bases.phi0[0].kron(&self.bases.phi_u[0])
    }

    /// `|phi_k> (x) |chi>`.
    pub fn expected_output(&self) -> ComplexVector {
        self.bases.phi_k[0].kron(&self.bases.chi[0])
    }
}

fn check_parallel_cap(n: u32) -> Result<()> {
    let cap = limits().max_parallel_n;
    if n > cap {
        return Err(Error::TooLargeForDense { n, cap });
    }
    Ok(())
}

/// `sum_{p,q} (|a_p> (x) |b_q>)(<c_p| (x) <d_q|)` over all `N^2` index pairs.
fn assemble_two_channel(
    out_first: &[ComplexVector],
    out_second: &[ComplexVector],
    in_first: &[ComplexVector],
    in_second: &[ComplexVector],
) -> Result<ComplexMatrix> {
    let mut outs = Vec::with_capacity(out_first.len() * out_second.len());
    let mut ins = Vec::with_capacity(outs.capacity());
    for p in 0..out_first.len() {
        for q in 0..out_second.len() {
            outs.push(out_first[p].kron(&out_second[q]));
            ins.push(in_first[p].kron(&in_second[q]));
        }
    }
    ComplexMatrix::sum_of_outer_products(&outs, &ins)
}

/// Build the full `N^2 x N^2` operator and its factors.
pub fn build_parallel_operator(
    targets: &TargetSet,
    params: &SearchParams,
    chi: Option<ComplexVector>,
) -> Result<ParallelOperator> {
    check_parallel_cap(targets.n())?;
    let factors = build_parallel_factors(targets, params, chi)?;
    let b = &factors.bases;
    let matrix = assemble_two_channel(&b.phi_k, &b.chi, &b.phi0, &b.phi_u)?;
    Ok(ParallelOperator {
        matrix,
        chi: b.chi[0].clone(),
        factors: (factors.first, factors.second),
        bases: factors.bases,
        oracle_calls: factors.oracle_calls,
    })
}

/// Check the decoupling of the two channels.
///
/// Checks, by name: `unitary`, `maps_product_input`, `tensor_factorization`,
/// `first_factor_maps_phi0`, `second_factor_maps_phi_u`, and the same three
/// matrix properties for the operator rebuilt with the channels exchanged
/// (`exchanged_*`).
pub fn verify_decoupling(p: &ParallelOperator) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let b = &p.bases;
    let (first, second) = &p.factors;

    report.push(Check::within("unitary", unitarity_residual(&p.matrix)?, TOL));
    let mapped = p.matrix.apply(&p.input_state())?;
    report.push(Check::within(
        "maps_product_input",
        mapped.max_abs_diff(&p.expected_output())?,
        TOL,
    ));
    report.push(Check::within(
        "tensor_factorization",
        p.matrix.max_abs_diff(&first.kron(second))?,
        TOL,
    ));
    report.push(Check::within(
        "first_factor_maps_phi0",
        first.apply(&b.phi0[0])?.max_abs_diff(&b.phi_k[0])?,
        TOL,
    ));
    report.push(Check::within(
        "second_factor_maps_phi_u",
        second.apply(&b.phi_u[0])?.max_abs_diff(&b.chi[0])?,
        TOL,
    ));

    let exchanged = assemble_two_channel(&b.chi, &b.phi_k, &b.phi_u, &b.phi0)?;
    report.push(Check::within("exchanged_unitary", unitarity_residual(&exchanged)?, TOL));
    let mapped = exchanged.apply(&b.phi_u[0].kron(&b.phi0[0]))?;
    report.push(Check::within(
        "exchanged_maps_product_input",
        mapped.max_abs_diff(&b.chi[0].kron(&b.phi_k[0]))?,
        TOL,
    ));
    report.push(Check::within(
        "exchanged_tensor_factorization",
        exchanged.max_abs_diff(&second.kron(first))?,
        TOL,
    ));
    Ok(report)
}
