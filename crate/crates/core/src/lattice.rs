//! The phase-reversed superlattice and its explicit signed-segment realization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QpmError, Result};

fn default_chi0() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct RawStructure {
    l: f64,
    n: u32,
    m: u32,
    #[serde(default = "default_chi0")]
    chi0: f64,
}

/// A superlattice of `m` blocks, each holding `n` domains of length `l` (μm).
///
/// Derived quantities: poling period `d = 2l`, phase-reversal period
/// `Λ_ph = 2Nl`, total length `L = MNl`, grating vectors `G = π/l` and
/// `F = π/(Nl)`.
///
/// Odd `n` is accepted but flagged: the sign pattern then degenerates into
/// uniform alternation and there is no phase reversal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct StructureSpec {
    l: f64,
    n: u32,
    m: u32,
    chi0: f64,
    odd_n_warning: bool,
}

impl TryFrom<RawStructure> for StructureSpec {
    type Error = QpmError;

    fn try_from(raw: RawStructure) -> Result<Self> {
        StructureSpec::with_chi0(raw.l, raw.n, raw.m, raw.chi0)
    }
}

impl From<StructureSpec> for RawStructure {
    fn from(spec: StructureSpec) -> Self {
        RawStructure {
            l: spec.l,
            n: spec.n,
            m: spec.m,
            chi0: spec.chi0,
        }
    }
}

impl StructureSpec {
    /// Structure with unit susceptibility magnitude.
    pub fn new(l: f64, n: u32, m: u32) -> Result<Self> {
        Self::with_chi0(l, n, m, 1.0)
    }

    pub fn with_chi0(l: f64, n: u32, m: u32, chi0: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(QpmError::InvalidStructure {
                field: "l",
                reason: format!("must be a positive length, got {l}"),
            });
        }
        if n == 0 {
            return Err(QpmError::InvalidStructure {
                field: "n",
                reason: "must be at least 1".into(),
            });
        }
        if m == 0 {
            return Err(QpmError::InvalidStructure {
                field: "m",
                reason: "must be at least 1".into(),
            });
        }
        if !(chi0.is_finite() && chi0 > 0.0) {
            return Err(QpmError::InvalidStructure {
                field: "chi0",
                reason: format!("must be positive, got {chi0}"),
            });
        }
        Ok(StructureSpec {
            l,
            n,
            m,
            chi0,
            odd_n_warning: n % 2 == 1,
        })
    }

    /// Domain length `l` in μm.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Domains per block `N`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of blocks `M`.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn chi0(&self) -> f64 {
        self.chi0
    }

    /// Set when `N` is odd; such structures carry no twin-peak splitting.
    pub fn odd_n_warning(&self) -> bool {
        self.odd_n_warning
    }

    /// Poling period `d = 2l`.
    pub fn poling_period(&self) -> f64 {
        2.0 * self.l
    }

    /// Phase-reversal period `Λ_ph = 2Nl`.
    pub fn reversal_period(&self) -> f64 {
        2.0 * f64::from(self.n) * self.l
    }

    /// Total length `L = MNl`.
    pub fn total_length(&self) -> f64 {
        f64::from(self.m) * f64::from(self.n) * self.l
    }

    /// Grating vector of the poling, `G = 2π/d = π/l`.
    pub fn grating_g(&self) -> f64 {
        PI / self.l
    }

    /// Grating vector of the phase reversal, `F = 2π/Λ_ph = π/(Nl)`.
    pub fn grating_f(&self) -> f64 {
        PI / (f64::from(self.n) * self.l)
    }

    /// Total number of domains `MN`.
    pub fn domain_count(&self) -> usize {
        self.m as usize * self.n as usize
    }

    /// Dimensionless mismatch `x = l·Δk/2`.
    pub fn x_of_dk(&self, dk: f64) -> f64 {
        self.l * dk / 2.0
    }

    /// Inverse of [`StructureSpec::x_of_dk`].
    pub fn dk_of_x(&self, x: f64) -> f64 {
        2.0 * x / self.l
    }

    /// Same structure with domain length replaced.
    pub fn with_l(&self, l: f64) -> Result<Self> {
        Self::with_chi0(l, self.n, self.m, self.chi0)
    }

    /// Sign (+1 or −1) of domain `j = b·N + p`, equal to `(−1)^{p+b}`.
    ///
    /// For even `N` this is the product of a square wave of period `2l` and
    /// one of period `2Nl`, both starting at +1. For odd `N` it degenerates
    /// into plain alternation over all `MN` domains.
    pub fn domain_sign(&self, j: usize) -> f64 {
        let n = self.n as usize;
        if (j % n + j / n).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// One uniform layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Length in μm.
    pub length: f64,
    /// Signed susceptibility.
    pub chi: f64,
}

/// Ordered list of uniform layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentList {
    segments: Vec<Segment>,
    total_length: f64,
}

impl SegmentList {
    pub fn from_segments(segments: Vec<Segment>) -> Self {
        let total_length = segments.iter().map(|s| s.length).sum();
        SegmentList {
            segments,
            total_length,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of adjacent pairs with opposite signs.
    pub fn sign_flips(&self) -> usize {
        self.segments
            .windows(2)
            .filter(|w| w[0].chi.signum() != w[1].chi.signum())
            .count()
    }
}

/// Explicit segment realization of `spec`; the first segment is positive.
pub fn build_segments(spec: &StructureSpec) -> SegmentList {
    let segments = (0..spec.domain_count())
        .map(|j| Segment {
            length: spec.l(),
            chi: spec.domain_sign(j) * spec.chi0(),
        })
        .collect();
    SegmentList {
        segments,
        total_length: spec.total_length(),
    }
}

/// Piecewise-constant `χ(z)`; domain boundaries belong to the right-hand
/// segment, and `z = L` belongs to the last one.
pub fn chi_of_z(spec: &StructureSpec, z: f64) -> Result<f64> {
    let total = spec.total_length();
    if !(0.0..=total).contains(&z) {
        return Err(QpmError::domain(format!(
            "z = {z} lies outside [0, {total}]"
        )));
    }
    let j = ((z / spec.l()).floor() as usize).min(spec.domain_count() - 1);
    Ok(spec.domain_sign(j) * spec.chi0())
}
