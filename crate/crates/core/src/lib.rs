//! Phase-reversed quasi-phase-matched (QPM) superlattices.
//!
//! A superlattice is `M` blocks of `N` nonlinear domains of length `l`. The
//! sign of domain `p` in block `b` is `(-1)^(p+b)`: periodic poling (period
//! `2l`) whose phase reverses at every block boundary. The structure has two
//! grating vectors and can phase-match two three-wave processes at once.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: `sinc`, the Dirichlet ratio `sin(nθ)/sin θ` and the phase `α(Δk)`.
//! * [`lattice`]: [`StructureSpec`] and its explicit signed segment list.
//! * [`spectral`]: closed-form spectral functions `Y_N`, `Y_{M,N}`, `G(Δk)`
//!   and the truncated double-Fourier series.
//! * [`oracle`]: brute-force segment-sum and quadrature evaluations of `G(Δk)`.
//! * [`cascade`]: couplings and joint spectral functions for cascaded
//!   down-conversion.
//! * [`analysis`]: peak refinement and the double-phase-matching design search.
//! * [`cli`]: run configuration, subcommands and CSV/JSON/SVG emitters.
//!
//! Lengths are in μm and wave-vector mismatches in μm⁻¹. The dimensionless
//! mismatch is `x = l·Δk/2`.

pub mod analysis;
pub mod cascade;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod specfun;
pub mod spectral;

pub use analysis::{
    count_inter_twin_oscillations, design_search, find_peaks, DesignQuery, DesignResult, Peak,
    PeakRole,
};
pub use cascade::{
    coupling_constants, joint_h, scenario_presets, three_photon_amplitude, CascadeKind,
    CascadeScenario, JointGrid,
};
pub use error::{QpmError, Result};
pub use lattice::{build_segments, chi_of_z, Segment, SegmentList, StructureSpec};
pub use oracle::{oracle_quadrature, oracle_segment_sum, verify_grid, OracleReport};
pub use specfun::{alpha_phase, dirichlet_ratio, sinc};
pub use spectral::{
    fourier_pheno, g_effective, y_phase_reversed, y_phase_reversed_sum, y_uniform, SpectrumGrid,
    SpectrumSample,
};

pub use num_complex::Complex64;
