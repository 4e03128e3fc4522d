//! Exact-search parameters: iteration count, matching phase and rotation phase
//! for a known target fraction `lambda = M / N`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::ACOS_CLAMP;

/// Parameters of a phase-matched search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub lambda: f64,
    pub k: u32,
    /// Oracle/diffusion matching phase, radians in `[0, pi]`.
    pub alpha: f64,
    /// Rotation phase of the kernel eigenvalues, radians in `[0, pi]`.
    pub theta: f64,
    /// Set when `lambda = 1`: every basis state is a target, nothing to do.
    pub no_iteration: bool,
}

impl SearchParams {
    /// Residual `|cos(theta) - (1 - lambda (1 - cos(alpha)))|`.
    pub fn rotation_residual(&self) -> f64 {
        theta_residual(self.lambda, self.alpha, self.theta)
    }

    /// True when `theta = pi / (2k + 1)` within `tol` (vacuously for `k = 0`).
    pub fn is_exact(&self, tol: f64) -> bool {
        self.k == 0 || (self.theta - exact_rotation_phase_unchecked(self.k)).abs() <= tol
    }
}

/// `|cos(theta) - (1 - lambda (1 - cos(alpha)))|`.
pub fn theta_residual(lambda: f64, alpha: f64, theta: f64) -> f64 {
    (theta.cos() - (1.0 - lambda * (1.0 - alpha.cos()))).abs()
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            expected: "0 < lambda <= 1",
        });
    }
    Ok(())
}

/// Arguments this close to `+-1` are treated as exactly on the boundary. Near
/// `+-1` arccos amplifies rounding in its argument to about its square root,
/// so `lambda = 1/4, k = 1` would otherwise come out 1.5e-8 short of `pi`.
const ACOS_SNAP: f64 = 1e-14;

/// arccos with a small slack outside `[-1, 1]` clamped back onto the boundary.
fn clamped_acos(argument: f64) -> Option<f64> {
    if !(-1.0 - ACOS_CLAMP..=1.0 + ACOS_CLAMP).contains(&argument) {
        return None;
    }
    let x = if argument.abs() >= 1.0 - ACOS_SNAP {
        argument.signum()
    } else {
        argument
    };
    Some(x.acos())
}

/// Smallest `k` with `k >= (pi - acos(1 - 2 lambda)) / (2 acos(1 - 2 lambda))`.
pub fn optimal_iterations(lambda: f64) -> Result<u32> {
    check_lambda(lambda)?;
    let w = (1.0 - 2.0 * lambda).clamp(-1.0, 1.0).acos();
    let bound = (PI - w) / (2.0 * w);
    // The bound is exactly integral at lambda = 1/4 and lambda = 1; rounding
    // must not push those up a step.
    Ok((bound - 1e-9).ceil().max(0.0) as u32)
}

/// Matching phase `acos[1 - (1 - cos(pi / (2k + 1))) / lambda]`.
pub fn matching_phase(lambda: f64, k: u32) -> Result<f64> {
    check_lambda(lambda)?;
    if k == 0 {
        return Err(Error::OutOfRange {
            name: "k",
            value: 0.0,
            expected: "k >= 1",
        });
    }
    let argument = 1.0 - (1.0 - exact_rotation_phase_unchecked(k).cos()) / lambda;
    clamped_acos(argument).ok_or(Error::InfeasibleK {
        lambda,
        k,
        argument,
    })
}

/// Rotation phase from `cos(theta) = 1 - lambda (1 - cos(alpha))`.
pub fn rotation_phase(lambda: f64, alpha: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            expected: "0 <= alpha <= pi",
        });
    }
    let argument = 1.0 - lambda * (1.0 - alpha.cos());
    Ok(argument.clamp(-1.0, 1.0).acos())
}

/// The arctangent form of the rotation phase, mapped to `[0, pi]` through a
/// two-argument arctangent. Kept as an independent cross-check of
/// [`rotation_phase`].
pub fn rotation_phase_atan(lambda: f64, alpha: f64) -> f64 {
    let x = lambda * (1.0 - alpha.cos());
    (x * (2.0 - x)).max(0.0).sqrt().atan2(1.0 - x)
}

fn exact_rotation_phase_unchecked(k: u32) -> f64 {
    PI / (2 * k + 1) as f64
}

/// `pi / (2k + 1)`.
pub fn exact_rotation_phase(k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            expected: "k >= 1",
        });
    }
    Ok(exact_rotation_phase_unchecked(k))
}

/// Solve for the exact-search parameters of `lambda`.
///
/// `lambda = 1` gives `k = 0` with `alpha = theta = 0` and `no_iteration` set.
pub fn solve(lambda: f64) -> Result<SearchParams> {
    let k = optimal_iterations(lambda)?;
    if k == 0 {
        return Ok(SearchParams {
            lambda,
            k,
            alpha: 0.0,
            theta: 0.0,
            no_iteration: true,
        });
    }
    Ok(SearchParams {
        lambda,
        k,
        alpha: matching_phase(lambda, k)?,
        theta: exact_rotation_phase(k)?,
        no_iteration: false,
    })
}

/// Exact-search parameters for a chosen `k`, which may exceed the optimal
/// count; any `k >= optimal_iterations(lambda)` still reaches the targets
/// with certainty.
pub fn exact_params(lambda: f64, k: u32) -> Result<SearchParams> {
    let alpha = matching_phase(lambda, k)?;
    Ok(SearchParams {
        lambda,
        k,
        alpha,
        theta: exact_rotation_phase(k)?,
        no_iteration: false,
    })
}
