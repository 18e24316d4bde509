//! Peak structure of `|Y_{M,N}|` and the inverse design of double-phase-matched
//! superlattices.

mod design;
mod peaks;

pub use design::{
    design_search, design_search_all, DesignQuery, DesignResult, DEFAULT_MAX_RESULTS,
};
pub use peaks::{
    count_inter_twin_oscillations, feature_width, find_peaks, group_centre, group_of,
    nominal_twins, peak_near, refine_peak, twin_pair, Peak, PeakRole, SCAN_SAMPLES_PER_FEATURE,
};
