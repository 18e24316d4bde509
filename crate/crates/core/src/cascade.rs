//! Cascaded down-conversion in a phase-reversed superlattice.
//!
//! Two chained three-wave processes see mismatches Δk₁ and Δk₂. Their
//! couplings are the effective coupling `G(Δk)` evaluated at each mismatch,
//! and the joint phase-matching function is the separable product
//! `h(x₁, x₂) = (MN)²·Y(x₁)·Y(x₂)`. Field normalization constants are set to
//! one; amplitudes are in normalized units.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cli::emit::fmt_float;
use crate::error::{QpmError, Result};
use crate::lattice::{build_segments, StructureSpec};
use crate::oracle::oracle_segment_sum;
use crate::specfun::alpha_phase;
use crate::spectral::{g_effective, y_of_x};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadeKind {
    /// ω₀ → ω₁ + ω₂ followed by ω₂ → ω₁ + ω₁.
    Triplet,
    /// ϖ₀ → ϖ₂ + ϖ₂ followed by ϖ₂ → ϖ₁ + ϖ₁.
    FourPhoton,
}

impl std::str::FromStr for CascadeKind {
    type Err = QpmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "triplet" => Ok(CascadeKind::Triplet),
            "four_photon" => Ok(CascadeKind::FourPhoton),
            other => Err(QpmError::config(
                "preset",
                format!("unknown scenario `{other}` (expected triplet or four-photon)"),
            )),
        }
    }
}

/// A frequency expressed as a fraction of the pump frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyLabel {
    pub symbol: String,
    pub fraction_of_pump: f64,
}

/// A pair of mismatches to be phase-matched together. Frequency labels are
/// metadata: dispersion is not modelled, the mismatches are inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeScenario {
    pub kind: CascadeKind,
    /// Mismatch of the first process, μm⁻¹.
    pub dk1: f64,
    /// Mismatch of the second process, μm⁻¹.
    pub dk2: f64,
    /// Pump wavelength, μm.
    pub pump_wavelength: f64,
    pub crystal: String,
    pub frequencies: Vec<FrequencyLabel>,
    pub energy_conservation: String,
}

impl CascadeScenario {
    pub fn new(kind: CascadeKind, dk1: f64, dk2: f64, pump_wavelength: f64) -> Result<Self> {
        if !(dk1.is_finite() && dk2.is_finite()) {
            return Err(QpmError::domain("scenario mismatches must be finite"));
        }
        let label = |symbol: &str, fraction_of_pump: f64| FrequencyLabel {
            symbol: symbol.to_string(),
            fraction_of_pump,
        };
        let (frequencies, energy_conservation) = match kind {
            CascadeKind::Triplet => (
                vec![
                    label("ω₀", 1.0),
                    label("ω₁", 1.0 / 3.0),
                    label("ω₂", 2.0 / 3.0),
                ],
                "ω₀ = ω₁ + ω′₁ + ω″₁",
            ),
            CascadeKind::FourPhoton => (
                vec![label("ϖ₀", 1.0), label("ϖ₁", 0.25), label("ϖ₂", 0.5)],
                "ϖ₀ = ϖ₂ + ϖ₂, ϖ₂ = ϖ₁ + ϖ₁",
            ),
        };
        Ok(CascadeScenario {
            kind,
            dk1,
            dk2,
            pump_wavelength,
            crystal: "LiTaO3".to_string(),
            frequencies,
            energy_conservation: energy_conservation.to_string(),
        })
    }

    pub fn preset(kind: CascadeKind) -> Self {
        scenario_presets()
            .into_iter()
            .find(|s| s.kind == kind)
            .expect("every kind has a preset")
    }
}

/// Built-in scenarios: the LiTaO₃ photon-triplet cascade pumped at 0.53 μm
/// and the four-photon cascade pumped at 0.39 μm.
pub fn scenario_presets() -> Vec<CascadeScenario> {
    vec![
        CascadeScenario::new(CascadeKind::Triplet, 0.32, 0.87, 0.53).expect("finite"),
        CascadeScenario::new(CascadeKind::FourPhoton, 1.56, -1.312, 0.39).expect("finite"),
    ]
}

/// Couplings `(ζ, ξ)` of the two processes, `L·χ₀·e^{−iα(Δk)}·Y(Δk)` at Δk₁
/// and Δk₂, in χ₀·μm.
pub fn coupling_constants(
    scenario: &CascadeScenario,
    spec: &StructureSpec,
) -> (Complex64, Complex64) {
    (
        g_effective(scenario.dk1, spec),
        g_effective(scenario.dk2, spec),
    )
}

/// Joint phase-matching function `h = (MN)²·Y(x₁)·Y(x₂)`.
pub fn joint_h(x1: f64, x2: f64, spec: &StructureSpec) -> f64 {
    let mn = spec.domain_count() as f64;
    mn * mn * (y_of_x(x1, spec.n(), spec.m()) * y_of_x(x2, spec.n(), spec.m()))
}

/// Three-photon amplitude `Φ = l²·χ₀·e^{−iα(Δk₁)}·e^{−iα(Δk₂)}·h(x₁, x₂)`.
pub fn three_photon_amplitude(x1: f64, x2: f64, spec: &StructureSpec) -> Complex64 {
    let phase = -(alpha_phase(spec.dk_of_x(x1), spec) + alpha_phase(spec.dk_of_x(x2), spec));
    Complex64::from_polar(spec.l() * spec.l() * spec.chi0(), phase) * joint_h(x1, x2, spec)
}

/// `h` tabulated on a rectangular `x₁ × x₂` grid, stored row-major
/// (`h[i][j]` at `x1_axis[i]`, `x2_axis[j]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointGrid {
    pub spec: StructureSpec,
    pub x1_axis: Vec<f64>,
    pub x2_axis: Vec<f64>,
    pub h: Vec<Vec<f64>>,
}

fn axis(range: (f64, f64), n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || n == 0 {
        return Err(QpmError::domain(
            "joint grid axes need finite bounds and at least one sample",
        ));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if lo >= hi {
        return Err(QpmError::domain(format!(
            "joint grid axis [{lo}, {hi}] is empty"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect())
}

impl JointGrid {
    /// Fill an `n1 × n2` grid. A single-sample axis uses the lower bound.
    pub fn compute(
        spec: &StructureSpec,
        x1_range: (f64, f64),
        x2_range: (f64, f64),
        n1: usize,
        n2: usize,
    ) -> Result<Self> {
        let x1_axis = axis(x1_range, n1)?;
        let x2_axis = axis(x2_range, n2)?;
        let mn = spec.domain_count() as f64;
        let y2: Vec<f64> = x2_axis
            .iter()
            .map(|&x| y_of_x(x, spec.n(), spec.m()))
            .collect();
        let h = x1_axis
            .par_iter()
            .map(|&x1| {
                let y1 = y_of_x(x1, spec.n(), spec.m());
                y2.iter().map(|&y| mn * mn * (y1 * y)).collect()
            })
            .collect();
        Ok(JointGrid {
            spec: *spec,
            x1_axis,
            x2_axis,
            h,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.h
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute deviation from the segment-sum oracle over every
    /// `stride`-th grid point (row-major order), relative to `(MN)²`.
    pub fn spot_check(&self, stride: usize) -> Result<f64> {
        let stride = stride.max(1);
        let spec = &self.spec;
        let segments = build_segments(spec);
        let scale = spec.total_length() * spec.chi0();
        let y_oracle = |x: f64| -> Result<f64> {
            let dk = spec.dk_of_x(x);
            let g = oracle_segment_sum(dk, &segments)?;
            Ok((Complex64::i() * Complex64::cis(alpha_phase(dk, spec)) * g / scale).re)
        };
        let n2 = self.x2_axis.len();
        let total = self.x1_axis.len() * n2;
        let mn2 = (spec.domain_count() as f64).powi(2);
        let mut worst = 0.0f64;
        for idx in (0..total).step_by(stride) {
            let (i, j) = (idx / n2, idx % n2);
            let reference = mn2 * y_oracle(self.x1_axis[i])? * y_oracle(self.x2_axis[j])?;
            worst = worst.max((reference - self.h[i][j]).abs() / mn2);
        }
        Ok(worst)
    }

    pub const CSV_HEADER: &'static str = "x1,x2,h";

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.x1_axis.len() * self.x2_axis.len() * 72);
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for (i, &x1) in self.x1_axis.iter().enumerate() {
            for (j, &x2) in self.x2_axis.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_float(x1),
                    fmt_float(x2),
                    fmt_float(self.h[i][j])
                );
            }
        }
        out
    }
}
