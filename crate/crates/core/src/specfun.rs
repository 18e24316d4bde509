//! Special functions with their removable singularities handled explicitly.

use std::f64::consts::PI;

use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;

/// Distance from a multiple of π below which `sin(nθ)/sin θ` switches to its
/// Taylor expansion.
pub const DIRICHLET_TAYLOR_THRESHOLD: f64 = 1e-6;

const SINC_TAYLOR_THRESHOLD: f64 = 1e-4;

/// Unnormalized cardinal sine `sin(x)/x`, continuously extended to 1 at 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// [`sinc`] that rejects non-finite arguments.
pub fn checked_sinc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(QpmError::domain(format!("sinc argument {x} is not finite")));
    }
    Ok(sinc(x))
}

/// Split `theta` into `k·π + delta` with `|delta| <= π/2`.
fn reduce_to_pi_multiple(theta: f64) -> (i64, f64) {
    let k = (theta / PI).round();
    (k as i64, theta - k * PI)
}

/// `sin(nθ)/sin(θ)` for `n >= 1`.
///
/// The argument is first reduced to `θ = kπ + δ`; the ratio is then
/// `(-1)^{k(n+1)} · sin(nδ)/sin(δ)`, with the last factor replaced by
/// `n·[1 − (n²−1)δ²/6 + (n²−1)(3n²−7)δ⁴/360]` when `|δ|` is below
/// [`DIRICHLET_TAYLOR_THRESHOLD`]. The result is clamped to `[-n, n]`.
pub fn dirichlet_ratio(theta: f64, n: u32) -> f64 {
    debug_assert!(n >= 1);
    if n == 1 {
        return 1.0;
    }
    let (k, delta) = reduce_to_pi_multiple(theta);
    let nf = f64::from(n);
    let sign = if (k.rem_euclid(2) == 1) && n.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    };
    let core = if delta.abs() < DIRICHLET_TAYLOR_THRESHOLD {
        let n2m1 = nf * nf - 1.0;
        let d2 = delta * delta;
        nf * (1.0 - n2m1 * d2 / 6.0 + n2m1 * (3.0 * nf * nf - 7.0) * d2 * d2 / 360.0)
    } else {
        (nf * delta).sin() / delta.sin()
    };
    (sign * core).clamp(-nf, nf)
}

/// [`dirichlet_ratio`] that validates its arguments.
pub fn checked_dirichlet_ratio(theta: f64, n: u32) -> Result<f64> {
    if !theta.is_finite() {
        return Err(QpmError::domain(format!(
            "dirichlet ratio argument {theta} is not finite"
        )));
    }
    if n == 0 {
        return Err(QpmError::domain("dirichlet ratio needs n >= 1"));
    }
    Ok(dirichlet_ratio(theta, n))
}

/// Phase `α(Δk) = (N·l/2)·[(Δk − G) + (M − 1)(Δk − F)]` of the effective coupling.
pub fn alpha_phase(dk: f64, spec: &StructureSpec) -> f64 {
    let half_block = f64::from(spec.n()) * spec.l() / 2.0;
    half_block * ((dk - spec.grating_g()) + f64::from(spec.m() - 1) * (dk - spec.grating_f()))
}

/// d/dx ln|sinc(x)|.
pub(crate) fn sinc_log_derivative(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_THRESHOLD {
        -x / 3.0
    } else {
        1.0 / x.tan() - 1.0 / x
    }
}

/// d/dθ ln|sin(nθ)/sin θ|.
pub(crate) fn dirichlet_log_derivative(theta: f64, n: u32) -> f64 {
    if n == 1 {
        return 0.0;
    }
    let nf = f64::from(n);
    let (_, delta) = reduce_to_pi_multiple(theta);
    if (nf * delta).abs() < 1e-3 {
        let d3 = delta * delta * delta;
        -(nf * nf - 1.0) * delta / 3.0 - (nf.powi(4) - 1.0) * d3 / 45.0
    } else {
        nf / (nf * delta).tan() - 1.0 / delta.tan()
    }
}
