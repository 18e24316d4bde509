//! Closed-form spectral functions of uniform and phase-reversed gratings.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cli::emit::fmt_float;
use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;
use crate::specfun::{alpha_phase, dirichlet_ratio, sinc};

/// Default truncation `|n|, |m| <= 201` of the double Fourier series.
pub const DEFAULT_FOURIER_TRUNCATION: u32 = 201;

/// Samples per `π/(MN)` in `x` used by [`SampleCount::Auto`].
pub const AUTO_SAMPLES_PER_FEATURE: f64 = 50.0;

/// Minimum samples per `π/(MNl)` in Δk for a grid to count as resolved.
pub const MIN_SAMPLES_PER_DK_FEATURE: f64 = 20.0;

/// Uniform periodically poled grating of `n_domains` domains:
/// `Y_N = sinc(lΔk/2)·sin[Nl(Δk−G)/2] / (N·sin[l(Δk−G)/2])`, `G = π/l`.
pub fn y_uniform(dk: f64, l: f64, n_domains: u32) -> f64 {
    let g = PI / l;
    sinc(l * dk / 2.0) * dirichlet_ratio(l * (dk - g) / 2.0, n_domains) / f64::from(n_domains)
}

fn product_form(sinc_arg: f64, domain_arg: f64, block_arg: f64, n: u32, m: u32) -> f64 {
    sinc(sinc_arg) * dirichlet_ratio(domain_arg, n) * dirichlet_ratio(block_arg, m)
        / (f64::from(n) * f64::from(m))
}

/// `Y_{M,N}(Δk)` in product form: the single-domain `sinc`, the domain
/// Dirichlet ratio around `G` and the block Dirichlet ratio around `F`,
/// normalized by `MN`.
pub fn y_phase_reversed(dk: f64, spec: &StructureSpec) -> f64 {
    let l = spec.l();
    let n = spec.n();
    product_form(
        l * dk / 2.0,
        l * (dk - spec.grating_g()) / 2.0,
        f64::from(n) * l * (dk - spec.grating_f()) / 2.0,
        n,
        spec.m(),
    )
}

/// `Y_{M,N}` as a function of the dimensionless mismatch `x = lΔk/2`.
///
/// Depends on `N` and `M` only; `l` drops out.
pub fn y_of_x(x: f64, n: u32, m: u32) -> f64 {
    product_form(x, x - FRAC_PI_2, f64::from(n) * x - FRAC_PI_2, n, m)
}

/// d/dx ln|Y_{M,N}(x)|, finite wherever none of the three factors vanishes.
pub(crate) fn y_log_derivative(x: f64, n: u32, m: u32) -> f64 {
    use crate::specfun::{dirichlet_log_derivative, sinc_log_derivative};
    let nf = f64::from(n);
    sinc_log_derivative(x)
        + dirichlet_log_derivative(x - FRAC_PI_2, n)
        + nf * dirichlet_log_derivative(nf * x - FRAC_PI_2, m)
}

/// `Y_{M,N}` from the geometric sums over domains and blocks.
///
/// Evaluates `sinc(lΔk/2)·e^{iφ}/(MN) · Σ_{n=1}^{N} e^{−iln(Δk−G)} ·
/// Σ_{m=0}^{M−1} e^{−iNlm(Δk−F)}` with `φ = l(Δk−G)/2`. With this indexing
/// the result equals `e^{−iα(Δk)}·Y_{M,N}(Δk)` exactly.
pub fn y_phase_reversed_sum(dk: f64, spec: &StructureSpec) -> Complex64 {
    let l = spec.l();
    let n = spec.n();
    let m = spec.m();
    let domain_step = l * (dk - spec.grating_g());
    let block_step = f64::from(n) * l * (dk - spec.grating_f());
    let domains: Complex64 = (1..=n)
        .map(|k| Complex64::cis(-domain_step * f64::from(k)))
        .sum();
    let blocks: Complex64 = (0..m)
        .map(|k| Complex64::cis(-block_step * f64::from(k)))
        .sum();
    let prefactor = sinc(l * dk / 2.0) / (f64::from(n) * f64::from(m));
    Complex64::cis(domain_step / 2.0) * domains * blocks * prefactor
}

/// Effective coupling `G(Δk) = L·χ₀·e^{−iα(Δk)}·Y_{M,N}(Δk)` in units of χ₀·μm.
pub fn g_effective(dk: f64, spec: &StructureSpec) -> Complex64 {
    Complex64::from_polar(spec.total_length() * spec.chi0(), -alpha_phase(dk, spec))
        * y_phase_reversed(dk, spec)
}

/// Truncated double Fourier series of the two-square-wave susceptibility.
///
/// Sums `χ₀L·g_n·g_m·e^{−i(L/2)(Δk−nG−mF)}·sinc((L/2)(Δk−nG−mF))` over odd
/// `|n| <= n_max` and odd `|m| <= m_max`, with `g_k = 2/(πk)`. Even orders
/// carry no weight and are skipped. With these real coefficients the
/// untruncated series converges to `i·g_effective`.
pub fn fourier_pheno(dk: f64, spec: &StructureSpec, n_max: u32, m_max: u32) -> Result<Complex64> {
    if n_max == 0 || m_max == 0 {
        return Err(QpmError::domain(
            "fourier truncation orders must be at least 1",
        ));
    }
    let total = spec.total_length();
    let half = total / 2.0;
    let g = spec.grating_g();
    let f = spec.grating_f();
    let odd = |max: u32| -> Vec<f64> {
        let max = i64::from(max);
        (-max..=max)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| k as f64)
            .collect()
    };
    let n_orders = odd(n_max);
    let m_orders = odd(m_max);
    let mut acc = Complex64::new(0.0, 0.0);
    for &n in &n_orders {
        let g_n = 2.0 / (PI * n);
        for &m in &m_orders {
            let g_m = 2.0 / (PI * m);
            let arg = half * (dk - n * g - m * f);
            acc += Complex64::cis(-arg) * (g_n * g_m * sinc(arg));
        }
    }
    Ok(acc * (spec.chi0() * total))
}

/// Constant relating the limit of [`fourier_pheno`] to [`g_effective`].
pub const FOURIER_PHASE: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// One point of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    /// Mismatch Δk, μm⁻¹.
    pub dk: f64,
    /// `l·Δk/2`.
    pub x: f64,
    /// `Y_{M,N}(Δk)`.
    pub y: f64,
    /// `G(Δk)`, χ₀·μm.
    pub g: Complex64,
}

impl SpectrumSample {
    pub fn evaluate(dk: f64, spec: &StructureSpec) -> Self {
        let y = y_phase_reversed(dk, spec);
        let g =
            Complex64::from_polar(spec.total_length() * spec.chi0(), -alpha_phase(dk, spec)) * y;
        SpectrumSample {
            dk,
            x: spec.x_of_dk(dk),
            y,
            g,
        }
    }
}

/// How many samples a grid gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", untagged)]
pub enum SampleCount {
    Fixed(usize),
    Auto(AutoTag),
}

/// Marker for `samples = "auto"` in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl SampleCount {
    pub const AUTO: SampleCount = SampleCount::Auto(AutoTag::Auto);

    /// Concrete count for a window of width `x_width` in `x`.
    pub fn resolve(self, spec: &StructureSpec, x_width: f64) -> usize {
        match self {
            SampleCount::Fixed(n) => n,
            SampleCount::Auto(_) => {
                let feature = PI / spec.domain_count() as f64;
                ((x_width / feature * AUTO_SAMPLES_PER_FEATURE).ceil() as usize + 1).max(2)
            }
        }
    }
}

impl std::str::FromStr for SampleCount {
    type Err = QpmError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(SampleCount::AUTO);
        }
        s.parse::<usize>().map(SampleCount::Fixed).map_err(|_| {
            QpmError::config(
                "samples",
                format!("expected `auto` or an integer, got `{s}`"),
            )
        })
    }
}

/// `Y` and `G` sampled on a uniform Δk grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub spec: StructureSpec,
    pub dk_min: f64,
    pub dk_max: f64,
    /// Samples per narrowest feature width `π/(MNl)` in Δk.
    pub samples_per_feature: f64,
    pub samples: Vec<SpectrumSample>,
}

impl SpectrumGrid {
    /// Evaluate `n_samples` equally spaced points on `[dk_min, dk_max]`.
    pub fn compute(
        spec: &StructureSpec,
        dk_min: f64,
        dk_max: f64,
        n_samples: usize,
    ) -> Result<Self> {
        if !(dk_min.is_finite() && dk_max.is_finite() && dk_min < dk_max) {
            return Err(QpmError::domain(format!(
                "spectrum window [{dk_min}, {dk_max}] is empty"
            )));
        }
        if n_samples < 2 {
            return Err(QpmError::domain("spectrum needs at least 2 samples"));
        }
        let step = (dk_max - dk_min) / (n_samples - 1) as f64;
        let samples = (0..n_samples)
            .into_par_iter()
            .map(|i| {
                let dk = if i + 1 == n_samples {
                    dk_max
                } else {
                    dk_min + step * i as f64
                };
                SpectrumSample::evaluate(dk, spec)
            })
            .collect();
        let feature = PI / (spec.domain_count() as f64 * spec.l());
        Ok(SpectrumGrid {
            spec: *spec,
            dk_min,
            dk_max,
            samples_per_feature: feature / step,
            samples,
        })
    }

    /// Grid over an `x` window.
    pub fn over_x(
        spec: &StructureSpec,
        x_min: f64,
        x_max: f64,
        count: SampleCount,
    ) -> Result<Self> {
        let n = count.resolve(spec, x_max - x_min);
        Self::compute(spec, spec.dk_of_x(x_min), spec.dk_of_x(x_max), n)
    }

    /// Whether the grid has at least [`MIN_SAMPLES_PER_DK_FEATURE`] samples per
    /// narrow-peak width.
    pub fn is_resolved(&self) -> bool {
        self.samples_per_feature >= MIN_SAMPLES_PER_DK_FEATURE
    }

    pub const CSV_HEADER: &'static str = "dk,x,y,re_g,im_g,abs_g";

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 150);
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_float(s.dk),
                fmt_float(s.x),
                fmt_float(s.y),
                fmt_float(s.g.re),
                fmt_float(s.g.im),
                fmt_float(s.g.norm())
            );
        }
        out
    }
}
