use std::f64::consts::PI;
use std::time::Instant;

use grover_decomp::decomposition::{reduced_state_i_with, reduced_state_ii_with};
use grover_decomp::golden::{self, ComplexRepr};
use grover_decomp::limits::{limits, TOL};
use grover_decomp::operators::{grover_iterate_in_place, initial_state, success_probability, CountingOracle};
use grover_decomp::params::{exact_params, optimal_iterations, rotation_phase, theta_residual};
use grover_decomp::parallel::{build_parallel_factors, build_parallel_operator, verify_decoupling};
use grover_decomp::suites::{self, Fault, SuiteConfig, SuiteKind, SuiteOutcome};
use grover_decomp::{build_shortcut, solve, Check, ComplexVector, Error, SearchParams, TargetSet};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{FaultArg, Mode, SimulateArgs, Suite, VerifyArgs};

/// Target lists longer than this are reported by count only.
const MAX_LISTED_TARGETS: usize = 1024;

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    pub lambda: f64,
    pub k: u32,
    pub alpha_radians: f64,
    pub theta_radians: f64,
    /// `|cos(theta) - (1 - lambda (1 - cos(alpha)))|`.
    pub cos_theta_check: f64,
    pub status: &'static str,
}

pub fn params(lambda: f64) -> Result<ParamsReport, Error> {
    let p = solve(lambda)?;
    Ok(ParamsReport {
        lambda,
        k: p.k,
        alpha_radians: p.alpha,
        theta_radians: p.theta,
        cos_theta_check: p.rotation_residual(),
        status: if p.no_iteration {
            "no-iteration search"
        } else {
            "exact search"
        },
    })
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub mode: &'static str,
    pub n: u32,
    pub dim: usize,
    pub target_count: usize,
    pub targets: Option<Vec<usize>>,
    pub lambda: f64,
    pub k: u32,
    pub alpha: f64,
    pub theta: f64,
    /// False when theta does not follow from lambda and alpha within tol.
    pub consistent: bool,
    pub theta_residual: f64,
    pub oracle_calls: usize,
    pub success_probability: f64,
    pub norm: f64,
    pub target_amplitude: ComplexRepr,
    pub non_target_amplitude: Option<ComplexRepr>,
    /// Largest spread among target amplitudes and among non-target amplitudes.
    pub amplitude_spread: f64,
    pub wall_time_seconds: f64,
    pub warnings: Vec<String>,
    pub amplitudes: Option<Vec<ComplexRepr>>,
}

fn resolve_targets(args: &SimulateArgs) -> Result<TargetSet, Error> {
    match (&args.targets, args.target_count) {
        (Some(list), _) => TargetSet::from_unsorted(args.n, list.clone()),
        (None, Some(m)) => {
            if args.n < usize::BITS && m > 1usize << args.n {
                return Err(Error::InvalidTargets(format!(
                    "{m} targets do not fit in {} states",
                    1u128 << args.n
                )));
            }
            TargetSet::prefix(args.n, m)
        }
        (None, None) => TargetSet::single(args.n, 0),
    }
}

/// The angle in `[0, pi]` with the same cosine.
fn fold_phase(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(2.0 * PI);
    a.min(2.0 * PI - a)
}

/// Solved parameters with any overrides applied.
fn resolve_params(lambda: f64, args: &SimulateArgs) -> Result<SearchParams, Error> {
    let mut p = match (args.k, args.alpha) {
        (Some(k), None) if k > 0 => exact_params(lambda, k)?,
        (Some(0), None) => SearchParams {
            lambda,
            k: 0,
            alpha: 0.0,
            theta: 0.0,
            no_iteration: true,
        },
        (k, Some(alpha)) => SearchParams {
            lambda,
            k: match k {
                Some(k) => k,
                None => optimal_iterations(lambda)?,
            },
            alpha,
            theta: rotation_phase(lambda, fold_phase(alpha))?,
            no_iteration: false,
        },
        _ => solve(lambda)?,
    };
    if let Some(theta) = args.theta {
        p.theta = theta;
    }
    Ok(p)
}

fn spread(values: impl Iterator<Item = Complex64>) -> f64 {
    let mut first = None;
    let mut worst: f64 = 0.0;
    for v in values {
        match first {
            None => first = Some(v),
            Some(f) => worst = worst.max((v - f).norm()),
        }
    }
    worst
}

pub fn simulate(args: &SimulateArgs, tol: f64) -> Result<SimulateReport, Error> {
    let cap = limits().max_state_n;
    if args.n > cap {
        return Err(Error::TooLarge { n: args.n, cap });
    }
    let targets = resolve_targets(args)?;
    let lambda = targets.lambda();
    let p = resolve_params(lambda, args)?;
    let residual = theta_residual(lambda, p.alpha, p.theta);
    let consistent = residual <= tol;
    let mut warnings = Vec::new();
    if !consistent {
        let msg = format!("theta is inconsistent with lambda and alpha (residual {residual:e})");
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let start = Instant::now();
    let (state, oracle_calls): (ComplexVector, usize) = match args.mode {
        Mode::Iterative => {
            let mut oracle = CountingOracle::new(&targets);
            let mut state = initial_state(targets.n())?;
            grover_iterate_in_place(&mut oracle, &mut state, p.alpha, p.k)?;
            (state, oracle.calls())
        }
        Mode::DecomposedI => {
            let mut oracle = CountingOracle::new(&targets);
            let state = reduced_state_i_with(&mut oracle, p.alpha, p.theta, p.k)?;
            (state, oracle.calls())
        }
        Mode::DecomposedIi => {
            let mut oracle = CountingOracle::new(&targets);
            let state = reduced_state_ii_with(&mut oracle, p.alpha, p.theta, p.k)?;
            (state, oracle.calls())
        }
        Mode::Shortcut => {
            let c = build_shortcut(&targets, &p)?;
            for w in &c.warnings {
                warnings.push(format!("{w:?}"));
            }
            (c.matrix.apply(&initial_state(targets.n())?)?, c.oracle_calls)
        }
        Mode::Parallel => {
            // The full two-channel matrix when it fits, otherwise each factor
            // on its own channel.
            if targets.n() <= limits().max_parallel_n {
                let op = build_parallel_operator(&targets, &p, None)?;
                let report = verify_decoupling(&op)?;
                for c in report.failures() {
                    warnings.push(format!("decoupling check {} off by {:e}", c.name, c.residual));
                }
                let (first, _) = &op.factors;
                (first.apply(&op.bases.phi0[0])?, op.oracle_calls)
            } else {
                let f = build_parallel_factors(&targets, &p, None)?;
                let (a, _) = f.apply(&f.bases.phi0[0], &f.bases.phi_u[0])?;
                (a, f.oracle_calls)
            }
        }
    };
    let wall_time_seconds = start.elapsed().as_secs_f64();

    let amps = state.as_slice();
    let first_target = targets.indices()[0];
    let first_other = targets.first_non_target();
    let amplitude_spread = spread(targets.indices().iter().map(|&i| amps[i]))
        .max(spread((0..targets.dim()).filter(|&i| !targets.contains(i)).map(|i| amps[i])));

    Ok(SimulateReport {
        mode: args.mode.name(),
        n: targets.n(),
        dim: targets.dim(),
        target_count: targets.count(),
        targets: (targets.count() <= MAX_LISTED_TARGETS).then(|| targets.indices().to_vec()),
        lambda,
        k: p.k,
        alpha: p.alpha,
        theta: p.theta,
        consistent,
        theta_residual: residual,
        oracle_calls,
        success_probability: success_probability(&state, &targets),
        norm: state.norm(),
        target_amplitude: amps[first_target].into(),
        non_target_amplitude: first_other.map(|i| amps[i].into()),
        amplitude_spread,
        wall_time_seconds,
        warnings,
        amplitudes: args.full.then(|| amps.iter().map(|&z| z.into()).collect()),
    })
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub fault: Option<Fault>,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

fn suite_kind(s: Suite) -> SuiteKind {
    match s {
        Suite::Identity => SuiteKind::Identity,
        Suite::Spectral => SuiteKind::Spectral,
        Suite::Unitarity => SuiteKind::Unitarity,
        Suite::Exactness => SuiteKind::Exactness,
        Suite::Shortcut => SuiteKind::Shortcut,
        Suite::Parallel => SuiteKind::Parallel,
        Suite::Golden => SuiteKind::Golden,
    }
}

pub fn verify(args: &VerifyArgs, tol: Option<f64>) -> Result<VerifyReport, Error> {
    let kinds: Vec<SuiteKind> = if args.suite.is_empty() {
        SuiteKind::ALL.to_vec()
    } else {
        args.suite.iter().map(|&s| suite_kind(s)).collect()
    };
    let fault = args.inject_fault.map(|f| match f {
        FaultArg::ThetaOffset => Fault::ThetaOffset,
    });
    let config = SuiteConfig {
        seed: args.seed,
        cases: args.cases,
        tol,
        fault,
    };
    let outcomes = suites::run_suites(&kinds, &config)?;
    Ok(VerifyReport {
        seed: args.seed,
        cases: args.cases,
        fault,
        passed: outcomes.iter().all(|o| o.passed),
        suites: outcomes,
    })
}

#[derive(Debug, Serialize)]
pub struct GoldenReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Reproduced by the simulator, row-major.
    pub shortcut_c8: Vec<ComplexRepr>,
    pub kernel_squared_8: Vec<ComplexRepr>,
    pub final_state_8: Vec<ComplexRepr>,
}

pub fn golden(tol: Option<f64>) -> Result<GoldenReport, Error> {
    let report = golden::golden_report(tol.unwrap_or(TOL))?;
    let targets = TargetSet::single(3, 0)?;
    let p = solve(targets.lambda())?;
    let c8 = build_shortcut(&targets, &p)?;
    let g2 = grover_decomp::iterative_matrix_power(&targets, p.alpha, p.k)?;
    let phi = grover_decomp::evolve_from_uniform(&targets, p.alpha, p.k)?;
    let repr = |s: &[Complex64]| s.iter().map(|&z| z.into()).collect();
    Ok(GoldenReport {
        passed: report.all_passed(),
        checks: report.checks,
        shortcut_c8: repr(c8.matrix.as_slice()),
        kernel_squared_8: repr(g2.as_slice()),
        final_state_8: repr(phi.as_slice()),
    })
}
