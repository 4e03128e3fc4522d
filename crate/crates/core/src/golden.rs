//! Reference data for the eight-state, single-target search (`n = 3`,
//! target `{0}`, `k = 2`).
//!
//! The checked-in fixtures are written from the closed forms in
//! [`closed_form`], never from the simulator, and rounded to 15 significant
//! digits. [`golden_report`] compares the simulator against them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::operators::{evolve_from_uniform, TargetSet};
use crate::params::solve;
use crate::report::{Check, VerificationReport};
use crate::shortcut::{build_shortcut, iterative_matrix_power, verify_shortcut};

/// A complex number as `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRepr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRepr> for Complex64 {
    fn from(z: ComplexRepr) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureHeader {
    pub n: u32,
    pub targets: Vec<usize>,
    pub k: u32,
    pub alpha: f64,
    pub theta: f64,
    pub source: String,
}

/// Header plus row-major data. A vector fixture has `cols = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub header: FixtureHeader,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<ComplexRepr>,
}

impl Fixture {
    pub fn parse(json: &str) -> Result<Self> {
        let f: Fixture = serde_json::from_str(json)
            .map_err(|e| Error::InvalidTargets(format!("malformed fixture: {e}")))?;
        if f.data.len() != f.rows * f.cols {
            return Err(Error::DimensionMismatch {
                expected: f.rows * f.cols,
                found: f.data.len(),
            });
        }
        Ok(f)
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_row_major(
            self.rows,
            self.cols,
            self.data.iter().map(|&z| z.into()).collect(),
        )
    }

    pub fn vector(&self) -> ComplexVector {
        ComplexVector::new(self.data.iter().map(|&z| z.into()).collect())
    }

    fn from_entries(source: &str, rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        Self {
            header: FixtureHeader {
                n: 3,
                targets: vec![0],
                k: 2,
                alpha: round15(closed_form::alpha()),
                theta: round15(closed_form::theta()),
                source: source.to_string(),
            },
            rows,
            cols,
            data: data
                .into_iter()
                .map(|z| ComplexRepr {
                    re: round15(z.re),
                    im: round15(z.im),
                })
                .collect(),
        }
    }

    /// JSON with one matrix entry per line, for review by eye.
    pub fn to_json(&self) -> String {
        let header = serde_json::to_string(&self.header).expect("header serializes");
        let entries: Vec<String> = self
            .data
            .iter()
            .map(|z| format!("    {}", serde_json::to_string(z).expect("entry serializes")))
            .collect();
        format!(
            "{{\n  \"header\": {header},\n  \"rows\": {},\n  \"cols\": {},\n  \"data\": [\n{}\n  ]\n}}",
            self.rows,
            self.cols,
            entries.join(",\n")
        )
    }
}

fn round15(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

pub const SHORTCUT_C8_JSON: &str = include_str!("../fixtures/shortcut_c8.json");
pub const KERNEL_SQUARED_8_JSON: &str = include_str!("../fixtures/kernel_squared_8.json");
pub const FINAL_STATE_8_JSON: &str = include_str!("../fixtures/final_state_8.json");

pub fn shortcut_c8() -> Result<Fixture> {
    Fixture::parse(SHORTCUT_C8_JSON)
}

pub fn kernel_squared_8() -> Result<Fixture> {
    Fixture::parse(KERNEL_SQUARED_8_JSON)
}

pub fn final_state_8() -> Result<Fixture> {
    Fixture::parse(FINAL_STATE_8_JSON)
}

/// Closed forms for `N = 8`, target `{0}`, `k = 2`, written out in radicals.
pub mod closed_form {
    use num_complex::Complex64;

    use crate::linalg::ComplexMatrix;

    fn s5() -> f64 {
        5f64.sqrt()
    }

    /// `sqrt(5 sqrt(5) - 11)`.
    fn r() -> f64 {
        (5.0 * s5() - 11.0).sqrt()
    }

    pub fn alpha() -> f64 {
        (-5.0 + 2.0 * s5()).acos()
    }

    pub fn theta() -> f64 {
        std::f64::consts::PI / 5.0
    }

    /// Target amplitude `(1/sqrt 8)[2(sqrt5 - 1) + i r (sqrt5 + 1)]`.
    pub fn v_t() -> Complex64 {
        Complex64::new(2.0 * (s5() - 1.0), r() * (s5() + 1.0)) / 8f64.sqrt()
    }

    pub fn a() -> Complex64 {
        v_t() / 8f64.sqrt()
    }

    pub fn b() -> Complex64 {
        Complex64::new(2.0 - 2.0 * s5(), r() * (1.0 + s5())) / 8.0
    }

    pub fn c() -> Complex64 {
        Complex64::new(610.0 - 274.0 * s5(), r() * (137.0 - 55.0 * s5())) / 8.0
    }

    pub fn d() -> Complex64 {
        Complex64::new(-102.0 + 46.0 * s5(), -r() * (23.0 - 9.0 * s5())) / 8.0
    }

    /// Shortcut matrix: first row `v_t / sqrt 8`; row `r >= 1` has
    /// `sqrt((8 - r) / (9 - r))` at column `r - 1` and
    /// `-1 / sqrt((8 - r)(9 - r))` at every later column.
    pub fn shortcut_c8() -> ComplexMatrix {
        ComplexMatrix::from_fn(8, 8, |i, j| {
            if i == 0 {
                return a();
            }
            let m = (8 - i) as f64;
            if j + 1 < i {
                Complex64::new(0.0, 0.0)
            } else if j + 1 == i {
                Complex64::new((m / (m + 1.0)).sqrt(), 0.0)
            } else {
                Complex64::new(-1.0 / (m * (m + 1.0)).sqrt(), 0.0)
            }
        })
    }

    /// Two kernel steps: first row `a`, first column below it `b`, diagonal
    /// `c`, everything else `d`.
    pub fn kernel_squared_8() -> ComplexMatrix {
        ComplexMatrix::from_fn(8, 8, |i, j| match (i, j) {
            (0, _) => a(),
            (_, 0) => b(),
            _ if i == j => c(),
            _ => d(),
        })
    }

    pub fn final_state_8() -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = v_t();
        v
    }
}

/// All fixtures regenerated from the closed forms.
pub fn regenerate() -> Vec<(&'static str, Fixture)> {
    let m = closed_form::shortcut_c8();
    let c8 = Fixture::from_entries("shortcut matrix C_8, closed form", 8, 8, m.as_slice().to_vec());
    let m = closed_form::kernel_squared_8();
    let g2 = Fixture::from_entries("kernel squared G_8^2, closed form", 8, 8, m.as_slice().to_vec());
    let phi = Fixture::from_entries("final state after two steps, closed form", 8, 1, closed_form::final_state_8());
    vec![
        ("shortcut_c8.json", c8),
        ("kernel_squared_8.json", g2),
        ("final_state_8.json", phi),
    ]
}

fn header_check(name: &'static str, f: &Fixture, alpha: f64, theta: f64, tol: f64) -> Check {
    let h = &f.header;
    let layout_ok = h.n == 3 && h.targets == [0] && h.k == 2;
    let residual = if layout_ok {
        (h.alpha - alpha).abs().max((h.theta - theta).abs())
    } else {
        f64::INFINITY
    };
    Check::within(name, residual, tol)
}

/// Reproduce the reference data with the simulator.
///
/// Checks, by name: `fixture_headers`, `final_state`, `shortcut_matrix`,
/// `kernel_squared_matrix`, `kernel_squared_entries` (the four distinct
/// entries against their radicals), and the `shortcut_*`/`power_*` checks of
/// [`verify_shortcut`] prefixed with `relation_`.
pub fn golden_report(tol: f64) -> Result<VerificationReport> {
    let targets = TargetSet::single(3, 0)?;
    let params = solve(targets.lambda())?;
    let mut report = VerificationReport::default();

    let c8_fix = shortcut_c8()?;
    let g2_fix = kernel_squared_8()?;
    let phi_fix = final_state_8()?;
    let header_residual = [&c8_fix, &g2_fix, &phi_fix]
        .into_iter()
        .map(|f| header_check("fixture_headers", f, params.alpha, params.theta, tol).residual)
        .fold(0.0, f64::max);
    report.push(Check::within("fixture_headers", header_residual, tol));

    let phi2 = evolve_from_uniform(&targets, params.alpha, params.k)?;
    report.push(Check::within(
        "final_state",
        phi2.max_abs_diff(&phi_fix.vector())?,
        tol,
    ));

    let c8 = build_shortcut(&targets, &params)?;
    report.push(Check::within(
        "shortcut_matrix",
        c8.matrix.max_abs_diff(&c8_fix.matrix()?)?,
        tol,
    ));

    let g2 = iterative_matrix_power(&targets, params.alpha, params.k)?;
    report.push(Check::within(
        "kernel_squared_matrix",
        g2.max_abs_diff(&g2_fix.matrix()?)?,
        tol,
    ));
    let entries = [
        (g2.get(0, 0), closed_form::a()),
        (g2.get(3, 0), closed_form::b()),
        (g2.get(5, 5), closed_form::c()),
        (g2.get(2, 6), closed_form::d()),
    ];
    let entry_residual = entries
        .iter()
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    report.push(Check::within("kernel_squared_entries", entry_residual, tol));

    for check in verify_shortcut(&c8, &g2)?.checks {
        report.push(Check {
            name: format!("relation_{}", check.name),
            ..check
        });
    }
    Ok(report)
}
