//! Seeded randomized verification suites.
//!
//! Every suite draws its cases from its own ChaCha stream, so the output for
//! a given seed does not depend on which other suites run or on thread count.
//! Each named check reports the worst residual over all cases.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{
    f_coefficients, reduced_operator_i_matrix, reduced_state_i_with, reduced_state_ii_with,
    split_for_total, target_amplitudes,
};
use crate::error::{Error, Result};
use crate::golden::golden_report;
use crate::limits::TOL;
use crate::linalg::{
    complete_with_canonical_seeds, completeness_residual, orthonormality_residual,
    unitarity_residual, ComplexMatrix, ComplexVector,
};
use crate::operators::{
    apply_oracle, dense_kernel_matrix, grover_iterate, grover_iterate_in_place, initial_state,
    kernel_eigenvalues, success_probability, two_dim_amplitudes, two_dim_kernel, CountingOracle,
    TargetSet,
};
use crate::parallel::{build_parallel_operator, verify_decoupling};
use crate::params::{exact_params, optimal_iterations, rotation_phase, solve};
use crate::report::Check;
use crate::shortcut::{build_shortcut, iterative_matrix_power, verify_shortcut};

/// Agreement between the four ways of computing the k-step state.
pub const PATH_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-10;
pub const EIGEN_RELATION_TOL: f64 = 1e-10;
pub const POWER_RELATION_TOL: f64 = 1e-9;
pub const SPECTRUM_TOL: f64 = 1e-12;
pub const PROBABILITY_TOL: f64 = 1e-9;
pub const AMPLITUDE_TOL: f64 = 1e-10;

/// Offset added to the rotation phase by [`Fault::ThetaOffset`].
pub const THETA_FAULT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Identity,
    Spectral,
    Unitarity,
    Exactness,
    Shortcut,
    Parallel,
    Golden,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 7] = [
        SuiteKind::Identity,
        SuiteKind::Spectral,
        SuiteKind::Unitarity,
        SuiteKind::Exactness,
        SuiteKind::Shortcut,
        SuiteKind::Parallel,
        SuiteKind::Golden,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Identity => "identity",
            SuiteKind::Spectral => "spectral",
            SuiteKind::Unitarity => "unitarity",
            SuiteKind::Exactness => "exactness",
            SuiteKind::Shortcut => "shortcut",
            SuiteKind::Parallel => "parallel",
            SuiteKind::Golden => "golden",
        }
    }

    fn stream(self) -> u64 {
        SuiteKind::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidTargets(format!("unknown suite {s:?}")))
    }
}

/// Deliberate corruption for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Shift the rotation phase fed to the decomposed paths by [`THETA_FAULT`].
    ThetaOffset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases in the identity suite; the other suites scale from it.
    pub cases: usize,
    /// Replaces every pinned tolerance when set.
    pub tol: Option<f64>,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            cases: 200,
            tol: None,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: SuiteKind,
    pub cases: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Per-name worst-case aggregation.
struct Acc {
    tol_override: Option<f64>,
    checks: Vec<Check>,
    cases: usize,
}

impl Acc {
    fn new(config: &SuiteConfig) -> Self {
        Acc {
            tol_override: config.tol,
            checks: Vec::new(),
            cases: 0,
        }
    }

    fn slot(&mut self, name: &str, init: Check) -> &mut Check {
        match self.checks.iter().position(|c| c.name == name) {
            Some(i) => &mut self.checks[i],
            None => {
                self.checks.push(init);
                self.checks.last_mut().unwrap()
            }
        }
    }

    /// Residual must stay at or below `tol`; keeps the maximum.
    fn within(&mut self, name: &str, residual: f64, tol: f64) {
        let tol = self.tol_override.unwrap_or(tol);
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        let c = self.slot(name, Check::within(name, 0.0, tol));
        c.residual = c.residual.max(residual);
        c.passed = c.residual <= c.tol;
    }

    /// Residual must stay above `tol`; keeps the minimum.
    fn exceeds(&mut self, name: &str, residual: f64, tol: f64) {
        let residual = if residual.is_nan() { 0.0 } else { residual };
        let c = self.slot(name, Check::exceeds(name, f64::INFINITY, tol));
        c.residual = c.residual.min(residual);
        c.passed = c.residual > c.tol;
    }

    /// Count mismatch as a residual.
    fn count(&mut self, name: &str, found: usize, expected: usize) {
        let c = self.slot(name, Check::within(name, 0.0, 0.0));
        c.residual = c.residual.max(found.abs_diff(expected) as f64);
        c.passed = c.residual == 0.0;
    }

    fn finish(self, suite: SuiteKind) -> SuiteOutcome {
        SuiteOutcome {
            suite,
            cases: self.cases,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
        }
    }
}

fn rng_for(kind: SuiteKind, seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind.stream());
    rng
}

fn random_targets(rng: &mut ChaCha8Rng, n: u32, max_count: Option<usize>) -> Result<TargetSet> {
    let dim = 1usize << n;
    let m = rng.gen_range(1..=max_count.unwrap_or(dim).min(dim));
    TargetSet::from_unsorted(n, sample(rng, dim, m).into_vec())
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> ComplexVector {
    ComplexVector::new(
        (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .normalized()
}

fn diff_norm(a: &ComplexVector, b: &ComplexVector) -> Result<f64> {
    let mut d = a.clone();
    d.axpy(Complex64::new(-1.0, 0.0), b)?;
    Ok(d.norm())
}

/// Random `alpha` in `(0.1, pi]`.
fn random_alpha(rng: &mut ChaCha8Rng) -> f64 {
    PI - rng.gen_range(0.0..PI - 0.1)
}

pub fn run_suite(kind: SuiteKind, config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut rng = rng_for(kind, config.seed);
    let mut acc = Acc::new(config);
    match kind {
        SuiteKind::Identity => identity(&mut rng, config, &mut acc)?,
        SuiteKind::Spectral => spectral(&mut rng, config, &mut acc)?,
        SuiteKind::Unitarity => unitarity(&mut rng, config, &mut acc)?,
        SuiteKind::Exactness => exactness(&mut rng, config, &mut acc)?,
        SuiteKind::Shortcut => shortcut(&mut rng, config, &mut acc)?,
        SuiteKind::Parallel => parallel(&mut rng, config, &mut acc)?,
        SuiteKind::Golden => {
            for c in golden_report(config.tol.unwrap_or(TOL))?.checks {
                acc.within(&c.name, c.residual, c.tol);
            }
            acc.cases = 1;
        }
    }
    Ok(acc.finish(kind))
}

/// Run `kinds` concurrently; results come back in the order given.
pub fn run_suites(kinds: &[SuiteKind], config: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    kinds.par_iter().map(|&k| run_suite(k, config)).collect()
}

pub fn run_all(config: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    run_suites(&SuiteKind::ALL, config)
}

fn identity(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let offset = match config.fault {
        Some(Fault::ThetaOffset) => THETA_FAULT,
        None => 0.0,
    };
    for _ in 0..config.cases {
        let n = rng.gen_range(1..=8);
        let targets = random_targets(rng, n, None)?;
        let alpha = random_alpha(rng);
        let k = rng.gen_range(1..=10);
        let theta = rotation_phase(targets.lambda(), alpha)? + offset;

        let mut oracle = CountingOracle::new(&targets);
        let mut iterative = initial_state(n)?;
        grover_iterate_in_place(&mut oracle, &mut iterative, alpha, k)?;
        acc.count("oracle_calls_iterative", oracle.calls(), k as usize);

        let mut oracle = CountingOracle::new(&targets);
        let path_i = reduced_state_i_with(&mut oracle, alpha, theta, k)?;
        acc.count("oracle_calls_decomposed_i", oracle.calls(), 1);

        let mut oracle = CountingOracle::new(&targets);
        let path_ii = reduced_state_ii_with(&mut oracle, alpha, theta, k)?;
        acc.count("oracle_calls_decomposed_ii", oracle.calls(), 1);

        let split = split_for_total(&targets, alpha, theta, k)?;

        acc.within("decomposed_i_matches_iterative", path_i.max_abs_diff(&iterative)?, PATH_TOL);
        acc.within("decomposed_ii_matches_iterative", path_ii.max_abs_diff(&iterative)?, PATH_TOL);
        acc.within("even_odd_matches_iterative", split.max_abs_diff(&iterative)?, PATH_TOL);
        for (name, state) in [
            ("norm_iterative", &iterative),
            ("norm_decomposed_i", &path_i),
            ("norm_decomposed_ii", &path_ii),
            ("norm_even_odd", &split),
        ] {
            acc.within(name, (state.norm() - 1.0).abs(), NORM_TOL);
        }

        let deep = f_coefficients(rng.gen_range(0.0..PI), 50);
        let f = &deep.f;
        let wronskian = (2..f.len())
            .map(|j| (f[j - 1] * f[j - 1] - f[j] * f[j - 2] - 1.0).abs())
            .fold(0.0, f64::max);
        acc.within("recurrence_determinant", wronskian, PATH_TOL);
        acc.cases += 1;
    }
    Ok(())
}

/// Roots of `z^2 - tr z + det`, ordered by imaginary part (larger first).
fn quadratic_eigenvalues(tr: Complex64, det: Complex64) -> (Complex64, Complex64) {
    let s = (tr * tr / 4.0 - det).sqrt();
    let (a, b) = (tr / 2.0 + s, tr / 2.0 - s);
    if a.im >= b.im {
        (a, b)
    } else {
        (b, a)
    }
}

fn spectral(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..config.cases.div_ceil(10) {
        let n = rng.gen_range(1..=8);
        let targets = random_targets(rng, n, None)?;
        let lambda = targets.lambda();
        let alpha = random_alpha(rng);
        let theta = rotation_phase(lambda, alpha)?;
        let phi0 = initial_state(n)?;
        let one = Complex64::new(1.0, 0.0);

        let g = dense_kernel_matrix(&targets, alpha)?;
        let g_dag = g.adjoint();
        let trace = 2.0 * (1.0 - lambda * (1.0 - alpha.cos()));
        let mut lhs = g.apply(&phi0)?;
        lhs.axpy(one, &g_dag.apply(&phi0)?)?;
        acc.within(
            "eigen_relation",
            diff_norm(&lhs, &phi0.scaled(Complex64::new(trace, 0.0)))?,
            EIGEN_RELATION_TOL,
        );
        acc.within(
            "adjoint_on_uniform",
            g_dag.apply(&phi0)?.max_abs_diff(&apply_oracle(&phi0, &targets, -alpha)?)?,
            EIGEN_RELATION_TOL,
        );

        let mut power = g.clone();
        for k in 1..=12u32 {
            if k > 1 {
                power = power.matmul(&g)?;
            }
            let mut lhs = power.apply(&phi0)?;
            lhs.axpy(one, &power.adjoint().apply(&phi0)?)?;
            let rhs = phi0.scaled(Complex64::new(2.0 * (k as f64 * theta).cos(), 0.0));
            acc.within("power_relation", diff_norm(&lhs, &rhs)?, POWER_RELATION_TOL);
        }

        let g2 = two_dim_kernel(lambda, alpha)?;
        let tr = g2.get(0, 0) + g2.get(1, 1);
        let det = g2.get(0, 0) * g2.get(1, 1) - g2.get(0, 1) * g2.get(1, 0);
        let (plus, minus) = quadratic_eigenvalues(tr, det);
        let spectrum = kernel_eigenvalues(lambda, alpha)?;
        acc.within(
            "eigenvalues_match_direct_solve",
            (plus - spectrum.eps_plus).norm().max((minus - spectrum.eps_minus).norm()),
            SPECTRUM_TOL,
        );
        acc.within(
            "eigenvalues_unit_modulus",
            (spectrum.eps_plus.norm() - 1.0).abs().max((spectrum.eps_minus.norm() - 1.0).abs()),
            SPECTRUM_TOL,
        );
        acc.within("eigenvalue_product", (spectrum.eps_plus * spectrum.eps_minus - one).norm(), SPECTRUM_TOL);
        acc.within("eigenvalue_phase", (spectrum.theta - theta).abs(), SPECTRUM_TOL);
        acc.within("two_dim_trace", (tr - trace).norm(), SPECTRUM_TOL);
        // G + G^dagger = Tr(G) I on the plane.
        let ch_residual = g2
            .add(&g2.adjoint())?
            .add(&ComplexMatrix::identity(2).scaled(Complex64::new(-trace, 0.0)))?
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        acc.within("two_dim_cayley_hamilton", ch_residual, SPECTRUM_TOL);
        acc.cases += 1;
    }
    Ok(())
}

fn unitarity(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..config.cases.div_ceil(4) {
        let n = rng.gen_range(1..=8);
        let targets = random_targets(rng, n, None)?;
        let alpha = random_alpha(rng);
        let k = rng.gen_range(0..=10);

        let g = dense_kernel_matrix(&targets, alpha)?;
        acc.within("kernel_unitary", unitarity_residual(&g)?, TOL);

        let state = random_state(rng, targets.dim());
        let matrix_free = grover_iterate(&state, &targets, alpha, k)?;
        let mut dense = state.clone();
        for _ in 0..k {
            dense = g.apply(&dense)?;
        }
        acc.within("matrix_free_matches_dense", matrix_free.max_abs_diff(&dense)?, TOL);
        acc.within("norm_preserved", (matrix_free.norm() - state.norm()).abs(), NORM_TOL);

        let basis = complete_with_canonical_seeds(&random_state(rng, targets.dim()))?;
        acc.within("completion_orthonormal", orthonormality_residual(&basis), TOL);
        acc.within("completion_complete", completeness_residual(&basis)?, TOL);
        acc.cases += 1;
    }

    // The one-kernel reduced operator is unitary only on a single qubit.
    let t = TargetSet::single(1, rng.gen_range(0..2))?;
    let p = solve(t.lambda())?;
    let m = reduced_operator_i_matrix(&t, p.alpha, p.theta, p.k)?;
    acc.within("reduced_operator_unitary_n1", unitarity_residual(&m)?, TOL);
    for n in 2..=6u32 {
        let t = random_targets(rng, n, Some((1usize << n) / 2))?;
        let opt = optimal_iterations(t.lambda())?;
        let k = opt.max(2) + rng.gen_range(0..3);
        let p = exact_params(t.lambda(), k)?;
        let m = reduced_operator_i_matrix(&t, p.alpha, p.theta, p.k)?;
        acc.exceeds("reduced_operator_not_unitary_n_ge_2", unitarity_residual(&m)?, TOL);
    }
    Ok(())
}

fn exactness(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let mut cases: Vec<TargetSet> = Vec::new();
    for m in 1..=8u32 {
        cases.push(TargetSet::single(m, rng.gen_range(0..1usize << m))?);
    }
    for _ in 0..config.cases.div_ceil(5) {
        let n = rng.gen_range(1..=10);
        let t = random_targets(rng, n, Some((1usize << n) - 1))?;
        cases.push(t);
    }

    for targets in cases {
        let lambda = targets.lambda();
        let dim = targets.dim();
        let big_m = targets.count() as f64;
        let p = solve(lambda)?;

        let amps = target_amplitudes(lambda, p.alpha, p.theta, p.k, dim)?;
        acc.within(
            "closed_form_probability",
            (big_m * amps.v_t.norm_sqr() - 1.0).abs(),
            PROBABILITY_TOL,
        );
        acc.within("closed_form_non_target_zero", amps.v_nt.norm(), PROBABILITY_TOL);

        let two = two_dim_amplitudes(lambda, p.alpha, p.k)?;
        acc.within("success_amplitude_matches", (amps.v_t * big_m.sqrt() - two.d_k).norm(), AMPLITUDE_TOL);
        acc.within(
            "failure_amplitude_matches",
            (amps.v_nt * (dim as f64 - big_m).sqrt() - two.u_k).norm(),
            AMPLITUDE_TOL,
        );

        let state = crate::operators::evolve_from_uniform(&targets, p.alpha, p.k)?;
        acc.within(
            "simulated_probability",
            (success_probability(&state, &targets) - 1.0).abs(),
            PROBABILITY_TOL,
        );

        // Any k above the optimum is also exact with its own phase.
        if p.k > 0 {
            let k = p.k + rng.gen_range(1..=3);
            let q = exact_params(lambda, k)?;
            let state = crate::decomposition::reduced_state_ii(&targets, q.alpha, q.theta, q.k)?;
            acc.within(
                "longer_exact_probability",
                (success_probability(&state, &targets) - 1.0).abs(),
                PROBABILITY_TOL,
            );
        }
        acc.cases += 1;
    }
    Ok(())
}

fn shortcut(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    // lambda in {1/2, 1/4, 1/8, 1/16}, N = 2^c / lambda, prefix targets.
    let mut cases = Vec::new();
    for log_inv in 1..=4u32 {
        for c in 0..=2u32 {
            cases.push(TargetSet::prefix(log_inv + c, 1usize << c)?);
        }
    }
    for _ in 0..config.cases.div_ceil(10) {
        let n = rng.gen_range(1..=6);
        cases.push(random_targets(rng, n, Some((1usize << n) - 1))?);
    }

    for targets in cases {
        let p = solve(targets.lambda())?;
        let c = build_shortcut(&targets, &p)?;
        acc.count("shortcut_oracle_calls", c.oracle_calls, 1);
        acc.within("shortcut_unitary", unitarity_residual(&c.matrix)?, TOL);
        acc.within("basis_in_complete", completeness_residual(&c.basis_in)?, TOL);
        acc.within("basis_out_complete", completeness_residual(&c.basis_out)?, TOL);
        let phi_k = grover_iterate(&initial_state(targets.n())?, &targets, p.alpha, p.k)?;
        acc.within(
            "shortcut_maps_to_final_state",
            c.matrix.apply(&initial_state(targets.n())?)?.max_abs_diff(&phi_k)?,
            TOL,
        );
        let g_pow = iterative_matrix_power(&targets, p.alpha, p.k)?;
        let report = verify_shortcut(&c, &g_pow)?;
        for check in report.checks {
            // Target rows only coincide with a single target.
            if check.name == "target_rows_equal" && targets.count() > 1 {
                continue;
            }
            acc.within(&format!("relation_{}", check.name), check.residual, check.tol);
        }
        acc.cases += 1;
    }
    Ok(())
}

fn parallel(rng: &mut ChaCha8Rng, config: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let mut cases: Vec<(TargetSet, Option<ComplexVector>)> = Vec::new();
    for n in 1..=3u32 {
        cases.push((TargetSet::single(n, 0)?, None));
    }
    for _ in 0..config.cases.div_ceil(20) {
        let n = rng.gen_range(1..=3);
        let t = random_targets(rng, n, Some((1usize << n) - 1))?;
        let chi = random_state(rng, t.dim());
        cases.push((t, Some(chi)));
    }

    for (targets, chi) in cases {
        let p = solve(targets.lambda())?;
        let op = build_parallel_operator(&targets, &p, chi)?;
        acc.count("parallel_oracle_calls", op.oracle_calls, 1);
        for check in verify_decoupling(&op)?.checks {
            acc.within(&check.name, check.residual, check.tol);
        }
        acc.within("channel_bases_orthonormal", op.bases.orthonormality_residual(), TOL);
        let input = random_state(rng, op.matrix.rows());
        acc.within(
            "norm_preserved",
            (op.matrix.apply(&input)?.norm() - 1.0).abs(),
            NORM_TOL,
        );
        acc.cases += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            cases: 40,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes() {
        for outcome in run_all(&small()).unwrap() {
            let failures: Vec<_> = outcome.failures().collect();
            assert!(outcome.passed, "{}: {failures:?}", outcome.suite);
            assert!(outcome.cases > 0);
        }
    }

    #[test]
    fn output_is_deterministic() {
        let a = run_suites(&[SuiteKind::Identity, SuiteKind::Unitarity], &small()).unwrap();
        let b = run_suites(&[SuiteKind::Unitarity, SuiteKind::Identity], &small()).unwrap();
        assert_eq!(a[0], b[1]);
        assert_eq!(a[1], b[0]);
    }

    #[test]
    fn theta_fault_breaks_identity() {
        let config = SuiteConfig {
            fault: Some(Fault::ThetaOffset),
            ..small()
        };
        let outcome = run_suite(SuiteKind::Identity, &config).unwrap();
        assert!(!outcome.passed);
        let failing: Vec<_> = outcome.failures().map(|c| c.name.as_str()).collect();
        assert!(failing.contains(&"decomposed_ii_matches_iterative"));
        // The iterative path ignores theta.
        assert!(!failing.contains(&"norm_iterative"));
    }

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::ALL {
            assert_eq!(kind.name().parse::<SuiteKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
        assert!("bogus".parse::<SuiteKind>().is_err());
    }
}
