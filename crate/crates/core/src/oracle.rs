//! Brute-force evaluations of the coupling integral used as ground truth.
//!
//! Phase convention: the integral is taken with `e^{−iΔk z}`, which makes the
//! segment sum and the quadrature agree in phase. Both then equal
//! `−i·g_effective(Δk)` exactly ([`CLOSED_FORM_PHASE`]); deviations against
//! the closed form are measured after applying that constant.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QpmError, Result};
use crate::lattice::{build_segments, chi_of_z, SegmentList, StructureSpec};
use crate::specfun::sinc;
use crate::spectral::g_effective;

/// `oracle = CLOSED_FORM_PHASE · g_effective`.
pub const CLOSED_FORM_PHASE: Complex64 = Complex64 { re: 0.0, im: -1.0 };

/// Deviations are relative to `max(|reference|, DEVIATION_FLOOR·L·χ₀)`.
pub const DEVIATION_FLOOR: f64 = 1e-6;

/// Gauss–Legendre order used by default.
pub const DEFAULT_POINTS_PER_SEGMENT: usize = 16;

/// Exact `G(Δk)` of a piecewise-constant medium:
/// `Σ_m l_m·χ_m·e^{−i(φ_m + Δk·l_m/2)}·sinc(Δk·l_m/2)` with `φ_m` the phase
/// accumulated over all preceding layers.
pub fn oracle_segment_sum(dk: f64, segments: &SegmentList) -> Result<Complex64> {
    if segments.is_empty() {
        return Err(QpmError::EmptySegments);
    }
    let (mut z_hi, mut z_lo) = (0.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in segments.segments() {
        let half = dk * seg.length / 2.0;
        let phase = reduced_phase(dk, z_hi, z_lo, half);
        acc += Complex64::cis(-phase) * (seg.length * seg.chi * sinc(half));
        let (sum, err) = two_sum(z_hi, seg.length);
        z_hi = sum;
        z_lo += err;
    }
    Ok(acc)
}

/// `a + b` as a rounded sum and its exact rounding error.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Low part of `2π` beyond [`TAU`].
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `dk·(z_hi + z_lo) + extra` reduced modulo `2π`, keeping the rounding
/// error of the product.
fn reduced_phase(dk: f64, z_hi: f64, z_lo: f64, extra: f64) -> f64 {
    let p = dk * z_hi;
    let err = dk.mul_add(z_hi, -p) + dk * z_lo + extra;
    let k = (p / TAU).round();
    (-k).mul_add(TAU, p) - k * TAU_LO + err
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Direct numerical integration of `∫₀^L χ(z)·e^{−iΔk z} dz`, one
/// Gauss–Legendre rule of `pts_per_segment` points per domain.
pub fn oracle_quadrature(
    dk: f64,
    spec: &StructureSpec,
    pts_per_segment: usize,
) -> Result<Complex64> {
    let (nodes, weights) = gauss_legendre(pts_per_segment);
    quadrature_with_rule(dk, spec, pts_per_segment, &nodes, &weights)
}

fn quadrature_with_rule(
    dk: f64,
    spec: &StructureSpec,
    pts_per_segment: usize,
    nodes: &[f64],
    weights: &[f64],
) -> Result<Complex64> {
    if pts_per_segment < 8 {
        return Err(QpmError::domain(format!(
            "quadrature needs at least 8 points per segment, got {pts_per_segment}"
        )));
    }
    let l = spec.l();
    let half = l / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..spec.domain_count() {
        let mid = j as f64 + 0.5;
        let centre = mid * l;
        let centre_lo = mid.mul_add(l, -centre);
        let chi = chi_of_z(spec, centre)?;
        let mut seg = Complex64::new(0.0, 0.0);
        for (t, w) in nodes.iter().zip(weights) {
            let phase = reduced_phase(dk, centre, centre_lo + half * t, 0.0);
            seg += Complex64::cis(-phase) * (w * chi);
        }
        acc += seg * half;
    }
    Ok(acc)
}

/// `|value − reference| / max(|reference|, DEVIATION_FLOOR·scale)`.
pub fn relative_deviation(value: Complex64, reference: Complex64, scale: f64) -> f64 {
    (value - reference).norm() / reference.norm().max(DEVIATION_FLOOR * scale)
}

/// Three-way comparison at one mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub dk: f64,
    pub g_closed: Complex64,
    pub g_segment_sum: Complex64,
    pub g_quadrature: Complex64,
    pub rel_dev_closed_vs_sum: f64,
    pub rel_dev_sum_vs_quad: f64,
}

/// Result of [`verify_grid`]: the per-sample reports plus the grid they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSweep {
    pub spec: StructureSpec,
    pub dk_min: f64,
    pub dk_max: f64,
    pub pts_per_segment: usize,
    pub max_dev_closed_vs_sum: f64,
    pub max_dev_sum_vs_quad: f64,
    pub reports: Vec<OracleReport>,
}

impl OracleSweep {
    pub const CSV_HEADER: &'static str = "dk,dev_closed_sum,dev_sum_quad";

    pub fn to_csv(&self) -> String {
        use crate::cli::emit::fmt_float;
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.reports {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_float(r.dk),
                fmt_float(r.rel_dev_closed_vs_sum),
                fmt_float(r.rel_dev_sum_vs_quad)
            ));
        }
        out
    }
}

/// Compare closed form, segment sum and quadrature at one point.
pub fn oracle_report(
    dk: f64,
    spec: &StructureSpec,
    segments: &SegmentList,
    pts_per_segment: usize,
) -> Result<OracleReport> {
    let (nodes, weights) = gauss_legendre(pts_per_segment);
    report_with_rule(dk, spec, segments, pts_per_segment, &nodes, &weights, 0.0)
}

fn report_with_rule(
    dk: f64,
    spec: &StructureSpec,
    segments: &SegmentList,
    pts_per_segment: usize,
    nodes: &[f64],
    weights: &[f64],
    perturbation: f64,
) -> Result<OracleReport> {
    let scale = spec.total_length() * spec.chi0();
    let g_closed = g_effective(dk, spec) * (1.0 + perturbation);
    let g_segment_sum = oracle_segment_sum(dk, segments)?;
    let g_quadrature = quadrature_with_rule(dk, spec, pts_per_segment, nodes, weights)?;
    Ok(OracleReport {
        dk,
        g_closed,
        g_segment_sum,
        g_quadrature,
        rel_dev_closed_vs_sum: relative_deviation(
            g_closed * CLOSED_FORM_PHASE,
            g_segment_sum,
            scale,
        ),
        rel_dev_sum_vs_quad: relative_deviation(g_quadrature, g_segment_sum, scale),
    })
}

/// Three-way comparison on `n_samples` equally spaced mismatches.
pub fn verify_grid(
    spec: &StructureSpec,
    dk_min: f64,
    dk_max: f64,
    n_samples: usize,
) -> Result<OracleSweep> {
    verify_grid_with(
        spec,
        dk_min,
        dk_max,
        n_samples,
        DEFAULT_POINTS_PER_SEGMENT,
        0.0,
    )
}

/// [`verify_grid`] with an explicit quadrature order and a relative
/// perturbation applied to the closed form (negative-control hook).
pub fn verify_grid_with(
    spec: &StructureSpec,
    dk_min: f64,
    dk_max: f64,
    n_samples: usize,
    pts_per_segment: usize,
    perturbation: f64,
) -> Result<OracleSweep> {
    if !(dk_min.is_finite() && dk_max.is_finite() && dk_min < dk_max) {
        return Err(QpmError::domain(format!(
            "verification window [{dk_min}, {dk_max}] is empty"
        )));
    }
    if n_samples < 2 {
        return Err(QpmError::domain("verification needs at least 2 samples"));
    }
    let segments = build_segments(spec);
    let (nodes, weights) = gauss_legendre(pts_per_segment);
    let step = (dk_max - dk_min) / (n_samples - 1) as f64;
    let reports = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let dk = if i + 1 == n_samples {
                dk_max
            } else {
                dk_min + step * i as f64
            };
            report_with_rule(
                dk,
                spec,
                &segments,
                pts_per_segment,
                &nodes,
                &weights,
                perturbation,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let max_dev_closed_vs_sum = reports
        .iter()
        .map(|r| r.rel_dev_closed_vs_sum)
        .fold(0.0, f64::max);
    let max_dev_sum_vs_quad = reports
        .iter()
        .map(|r| r.rel_dev_sum_vs_quad)
        .fold(0.0, f64::max);
    Ok(OracleSweep {
        spec: *spec,
        dk_min,
        dk_max,
        pts_per_segment,
        max_dev_closed_vs_sum,
        max_dev_sum_vs_quad,
        reports,
    })
}
