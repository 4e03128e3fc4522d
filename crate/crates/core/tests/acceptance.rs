//! Acceptance criteria. One PASS/FAIL line per criterion; exits non-zero if
//! any fails. Run with `cargo test -p grover-decomp --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use grover_decomp::decomposition::{reduced_operator_i_matrix, reduced_state_ii, target_amplitudes};
use grover_decomp::golden;
use grover_decomp::linalg::unitarity_residual;
use grover_decomp::operators::{evolve_from_uniform, success_probability, two_dim_amplitudes};
use grover_decomp::params::{exact_params, optimal_iterations};
use grover_decomp::suites::{self, SuiteConfig, SuiteKind};
use grover_decomp::{
    build_parallel_operator, build_shortcut, iterative_matrix_power, solve, verify_decoupling,
    TargetSet,
};
use num_complex::Complex64;

type Outcome = Result<String, String>;

/// Collects sub-results; the criterion passes only if every one does.
struct Findings {
    ok: bool,
    lines: Vec<String>,
}

impl Findings {
    fn new() -> Self {
        Findings {
            ok: true,
            lines: Vec::new(),
        }
    }

    fn within(&mut self, what: &str, residual: f64, tol: f64) {
        let pass = residual <= tol;
        self.ok &= pass;
        self.lines.push(format!(
            "{} {what}: {residual:.3e} (tol {tol:.0e})",
            if pass { "ok " } else { "BAD" }
        ));
    }

    fn holds(&mut self, what: &str, pass: bool) {
        self.ok &= pass;
        self.lines.push(format!("{} {what}", if pass { "ok " } else { "BAD" }));
    }

    fn finish(self) -> Outcome {
        let text = self.lines.join("\n      ");
        if self.ok {
            Ok(text)
        } else {
            Err(text)
        }
    }
}

fn err(e: grover_decomp::Error) -> String {
    format!("error: {e}")
}

fn sqrt5() -> f64 {
    5f64.sqrt()
}

/// `sqrt(5 sqrt 5 - 11)`.
fn r5() -> f64 {
    (5.0 * sqrt5() - 11.0).sqrt()
}

fn expected_v_t() -> Complex64 {
    Complex64::new(2.0 * (sqrt5() - 1.0), r5() * (sqrt5() + 1.0)) / 8f64.sqrt()
}

fn suite_findings(kind: SuiteKind, config: &SuiteConfig, pinned: &[(&str, f64)]) -> Result<Findings, String> {
    let outcome = suites::run_suite(kind, config).map_err(err)?;
    let mut f = Findings::new();
    f.holds(&format!("{} cases", outcome.cases), outcome.cases > 0);
    for c in &outcome.checks {
        // Tolerances are asserted here too, so a loosened suite constant fails.
        let tol = pinned
            .iter()
            .find(|(prefix, _)| c.name.starts_with(prefix))
            .map_or(c.tol, |&(_, t)| t);
        if c.tol == 0.0 {
            f.holds(&format!("{} exact count (off by {})", c.name, c.residual), c.passed);
        } else {
            f.within(&c.name, c.residual, tol);
        }
    }
    Ok(f)
}

fn appendix_a_state() -> Outcome {
    let mut f = Findings::new();
    let t = TargetSet::single(3, 0).map_err(err)?;
    let p = solve(t.lambda()).map_err(err)?;
    f.holds(&format!("k = {}", p.k), p.k == 2);
    f.within("alpha vs arccos(-5 + 2 sqrt 5)", (p.alpha - (-5.0 + 2.0 * sqrt5()).acos()).abs(), 1e-10);
    f.within("theta vs pi/5", (p.theta - PI / 5.0).abs(), 1e-10);

    let state = evolve_from_uniform(&t, p.alpha, p.k).map_err(err)?;
    let mut expected = vec![Complex64::new(0.0, 0.0); 8];
    expected[0] = expected_v_t();
    let dev = state
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    f.within("final state entrywise", dev, 1e-10);
    f.within("|v_t|^2 = 1", (state[0].norm_sqr() - 1.0).abs(), 1e-10);
    f.within("v_t = 0.874032 + 0.485868i (6 digits)", (state[0] - Complex64::new(0.874032, 0.485868)).norm(), 1e-6);
    f.finish()
}

fn appendix_b_matrices() -> Outcome {
    let mut f = Findings::new();
    let t = TargetSet::single(3, 0).map_err(err)?;
    let p = solve(t.lambda()).map_err(err)?;

    let c8 = build_shortcut(&t, &p).map_err(err)?;
    let fixture = golden::shortcut_c8().map_err(err)?;
    f.within(
        "shortcut vs checked-in fixture",
        c8.matrix.max_abs_diff(&fixture.matrix().map_err(err)?).map_err(err)?,
        1e-10,
    );
    // Two rows spelled out independently of the fixture.
    let row1 = (0..8).map(|j| {
        let want = if j == 0 { (7.0f64 / 8.0).sqrt() } else { -1.0 / (2.0 * 14f64.sqrt()) };
        (c8.matrix.get(1, j) - want).norm()
    });
    let row7 = (0..8).map(|j| {
        let want = match j {
            6 => 0.5f64.sqrt(),
            7 => -(0.5f64.sqrt()),
            _ => 0.0,
        };
        (c8.matrix.get(7, j) - want).norm()
    });
    f.within("rows 1 and 7 closed form", row1.chain(row7).fold(0.0, f64::max), 1e-10);

    let g2 = iterative_matrix_power(&t, p.alpha, 2).map_err(err)?;
    let a = expected_v_t() / 8f64.sqrt();
    let b = Complex64::new(2.0 - 2.0 * sqrt5(), r5() * (1.0 + sqrt5())) / 8.0;
    let c = Complex64::new(610.0 - 274.0 * sqrt5(), r5() * (137.0 - 55.0 * sqrt5())) / 8.0;
    let d = Complex64::new(-102.0 + 46.0 * sqrt5(), -r5() * (23.0 - 9.0 * sqrt5())) / 8.0;
    let mut dev: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let want = match (i, j) {
                (0, _) => a,
                (_, 0) => b,
                _ if i == j => c,
                _ => d,
            };
            dev = dev.max((g2.get(i, j) - want).norm());
        }
    }
    f.within("G^2 entries a, b, c, d", dev, 1e-10);
    let fixture = golden::kernel_squared_8().map_err(err)?;
    f.within(
        "G^2 vs checked-in fixture",
        g2.max_abs_diff(&fixture.matrix().map_err(err)?).map_err(err)?,
        1e-10,
    );
    f.finish()
}

fn identity_suite() -> Outcome {
    let config = SuiteConfig::default();
    let mut f = suite_findings(
        SuiteKind::Identity,
        &config,
        &[("decomposed", 1e-9), ("even_odd", 1e-9), ("norm", 1e-10)],
    )?;
    f.holds(&format!("at least 200 cases ({})", config.cases), config.cases >= 200);
    f.finish()
}

fn spectral_suite() -> Outcome {
    let f = suite_findings(
        SuiteKind::Spectral,
        &SuiteConfig::default(),
        &[
            ("eigen_relation", 1e-10),
            ("power_relation", 1e-9),
            ("eigenvalue", 1e-12),
        ],
    )?;
    f.finish()
}

fn exactness_sweep() -> Outcome {
    let mut f = Findings::new();
    let (mut prob_cf, mut prob_sim, mut d_dev, mut u_dev, mut prob_wide) = (0f64, 0f64, 0f64, 0f64, 0f64);
    for m in 1..=8u32 {
        let t = TargetSet::single(m, 0).map_err(err)?;
        let lambda = t.lambda();
        let dim = t.dim();
        let p = solve(lambda).map_err(err)?;
        let amps = target_amplitudes(lambda, p.alpha, p.theta, p.k, dim).map_err(err)?;
        prob_cf = prob_cf.max((amps.v_t.norm_sqr() - 1.0).abs());
        let two = two_dim_amplitudes(lambda, p.alpha, p.k).map_err(err)?;
        d_dev = d_dev.max((amps.v_t - two.d_k).norm());
        u_dev = u_dev.max((amps.v_nt * ((dim - 1) as f64).sqrt() - two.u_k).norm());
        let state = evolve_from_uniform(&t, p.alpha, p.k).map_err(err)?;
        prob_sim = prob_sim.max((success_probability(&state, &t) - 1.0).abs());

        // Same lambda on a 2^20 register with a block of targets.
        let wide = TargetSet::prefix(20, 1usize << (20 - m)).map_err(err)?;
        let state = evolve_from_uniform(&wide, p.alpha, p.k).map_err(err)?;
        prob_wide = prob_wide.max((success_probability(&state, &wide) - 1.0).abs());
    }
    f.within("M|v_t|^2 closed form, lambda = 2^-m, m = 1..8", prob_cf, 1e-9);
    f.within("simulated success probability, n = m", prob_sim, 1e-9);
    f.within("simulated success probability, n = 20", prob_wide, 1e-9);
    f.within("sqrt(M) v_t = d_k", d_dev, 1e-10);
    f.within("sqrt(N - M) v_nt = u_k", u_dev, 1e-10);
    f.finish()
}

fn unitarity_boundary() -> Outcome {
    let mut f = Findings::new();
    let t = TargetSet::single(1, 0).map_err(err)?;
    let p = solve(t.lambda()).map_err(err)?;
    let m = reduced_operator_i_matrix(&t, p.alpha, p.theta, p.k).map_err(err)?;
    f.within("n = 1 reduced operator unitary", unitarity_residual(&m).map_err(err)?, 1e-10);

    let mut shortcut_residual: f64 = 0.0;
    let c = build_shortcut(&t, &p).map_err(err)?;
    shortcut_residual = shortcut_residual.max(unitarity_residual(&c.matrix).map_err(err)?);
    for n in 2..=6u32 {
        let t = TargetSet::single(n, 0).map_err(err)?;
        let opt = optimal_iterations(t.lambda()).map_err(err)?;
        for k in opt.max(2)..=opt.max(2) + 1 {
            let p = exact_params(t.lambda(), k).map_err(err)?;
            let m = reduced_operator_i_matrix(&t, p.alpha, p.theta, p.k).map_err(err)?;
            let r = unitarity_residual(&m).map_err(err)?;
            f.holds(&format!("n = {n}, k = {k} reduced operator not unitary (residual {r:.3})"), r > 1e-10);
            let c = build_shortcut(&t, &p).map_err(err)?;
            shortcut_residual = shortcut_residual.max(unitarity_residual(&c.matrix).map_err(err)?);
        }
    }
    f.within("shortcut unitary for every case above", shortcut_residual, 1e-10);
    f.finish()
}

fn parallel_scheme() -> Outcome {
    let mut f = Findings::new();
    for n in 1..=3u32 {
        let t = TargetSet::single(n, 0).map_err(err)?;
        let p = solve(t.lambda()).map_err(err)?;
        let op = build_parallel_operator(&t, &p, None).map_err(err)?;
        let report = verify_decoupling(&op).map_err(err)?;
        for c in &report.checks {
            f.within(&format!("n = {n} {}", c.name), c.residual, 1e-10);
        }
    }
    f.finish()
}

fn performance() -> Outcome {
    let mut f = Findings::new();
    let t = TargetSet::single(24, 0).map_err(err)?;
    let p = solve(t.lambda()).map_err(err)?;
    let start = Instant::now();
    let state = reduced_state_ii(&t, p.alpha, p.theta, p.k).map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    f.within("n = 24 success probability", (success_probability(&state, &t) - 1.0).abs(), 1e-8);
    f.holds(&format!("n = 24 decomposed run took {elapsed:.3} s (< 5 s)"), elapsed < 5.0);
    f.finish()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 eight-state worked example: final state", appendix_a_state),
        ("2 eight-state shortcut and kernel-squared matrices", appendix_b_matrices),
        ("3 identity suite: four paths agree", identity_suite),
        ("4 spectral suite", spectral_suite),
        ("5 exactness sweep", exactness_sweep),
        ("6 unitarity boundary", unitarity_boundary),
        ("7 two-channel decoupling", parallel_scheme),
        ("8 performance at n = 24", performance),
    ];
    let verbose = std::env::args().any(|a| a == "--verbose" || a == "-v");
    let mut failed = 0;
    for (name, run) in criteria {
        let (pass, detail) = match run() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!("{} criterion {name}", if pass { "PASS" } else { "FAIL" });
        if verbose || !pass {
            println!("      {detail}");
        }
        failed += usize::from(!pass);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
