use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::peaks::{group_centre, group_of, peak_near, Peak};
use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;

/// Default cap on the number of returned designs.
pub const DEFAULT_MAX_RESULTS: usize = 20;

/// Parameters of a double-phase-matching search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignQuery {
    /// First-process mismatch, μm⁻¹.
    pub dk1: f64,
    /// Second-process mismatch, μm⁻¹.
    pub dk2: f64,
    /// Inclusive domain-length range, μm.
    pub l_range: (f64, f64),
    /// Inclusive range of domains per block.
    pub n_range: (u32, u32),
    /// Inclusive range of block counts.
    pub m_range: (u32, u32),
    #[serde(default = "default_max_results")]
    pub max_results: usize,
    #[serde(default)]
    pub allow_odd_n: bool,
}

fn default_max_results() -> usize {
    DEFAULT_MAX_RESULTS
}

impl DesignQuery {
    pub fn new(
        dk1: f64,
        dk2: f64,
        l_range: (f64, f64),
        n_range: (u32, u32),
        m_range: (u32, u32),
    ) -> Self {
        DesignQuery {
            dk1,
            dk2,
            l_range,
            n_range,
            m_range,
            max_results: DEFAULT_MAX_RESULTS,
            allow_odd_n: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("dk1", self.dk1), ("dk2", self.dk2)] {
            if !v.is_finite() || v == 0.0 {
                return Err(QpmError::config(name, "must be finite and nonzero"));
            }
        }
        let (l_lo, l_hi) = self.l_range;
        if !(l_lo.is_finite() && l_hi.is_finite() && l_lo > 0.0 && l_lo <= l_hi) {
            return Err(QpmError::config(
                "l_range",
                format!("invalid range {l_lo}:{l_hi}"),
            ));
        }
        if self.n_range.0 == 0 || self.n_range.0 > self.n_range.1 {
            return Err(QpmError::config(
                "n_range",
                format!("invalid range {}:{}", self.n_range.0, self.n_range.1),
            ));
        }
        if self.m_range.0 == 0 || self.m_range.0 > self.m_range.1 {
            return Err(QpmError::config(
                "m_range",
                format!("invalid range {}:{}", self.m_range.0, self.m_range.1),
            ));
        }
        if self.max_results == 0 {
            return Err(QpmError::config("max_results", "must be at least 1"));
        }
        Ok(())
    }
}

/// A candidate structure with the peaks its two targets land on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub spec: StructureSpec,
    pub matched_peaks: (Peak, Peak),
    /// `|x_target − x_peak|` for the two processes.
    pub residuals: (f64, f64),
    /// Largest residual in units of the matched peak's FWHM; below 1 means
    /// both targets sit inside their peaks.
    pub score: f64,
}

impl DesignResult {
    /// `x` of each target for this design.
    pub fn targets(&self, query: &DesignQuery) -> (f64, f64) {
        (self.spec.x_of_dk(query.dk1), self.spec.x_of_dk(query.dk2))
    }

    fn ordering(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then(self.spec.n().cmp(&other.spec.n()))
            .then(self.spec.m().cmp(&other.spec.m()))
            .then(self.spec.l().total_cmp(&other.spec.l()))
    }
}

/// Principal maxima of the block factor sit at odd multiples of `π/(2N)`;
/// only those within `2π/N` of a group centre are candidates.
fn is_candidate(k: i64, n: u32) -> bool {
    let x = k as f64 * PI / (2.0 * f64::from(n));
    (x - group_centre(group_of(x))).abs() <= 2.0 * PI / f64::from(n) + 1e-12
}

fn candidates_in(n: u32, x_lo: f64, x_hi: f64) -> Vec<f64> {
    let unit = PI / (2.0 * f64::from(n));
    let k_lo = (x_lo / unit).floor() as i64 - 1;
    let k_hi = (x_hi / unit).ceil() as i64 + 1;
    (k_lo..=k_hi)
        .filter(|k| k.rem_euclid(2) == 1 && is_candidate(*k, n))
        .map(|k| k as f64 * unit)
        .filter(|&x| x >= x_lo && x <= x_hi)
        .collect()
}

fn nearest_candidate(n: u32, x: f64) -> f64 {
    let unit = PI / (2.0 * f64::from(n));
    let k0 = (x / unit).round() as i64;
    let reach = 2 * i64::from(n) + 6;
    (k0 - reach..=k0 + reach)
        .filter(|k| k.rem_euclid(2) == 1 && is_candidate(*k, n))
        .map(|k| k as f64 * unit)
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()).then(a.total_cmp(b)))
        .expect("every π-period holds candidates")
}

fn with_dk(mut peak: Peak, l: f64) -> Peak {
    peak.dk = 2.0 * peak.x / l;
    peak
}

fn search_pair(query: &DesignQuery, n: u32, m: u32) -> Vec<DesignResult> {
    let unit = match StructureSpec::new(1.0, n, m) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let (l_lo, l_hi) = query.l_range;
    let (a, b) = (query.dk1 * l_lo / 2.0, query.dk1 * l_hi / 2.0);
    let (x_lo, x_hi) = (a.min(b), a.max(b));
    let window = PI / (f64::from(n) * f64::from(m));
    let mut out = Vec::new();
    for x_nominal in candidates_in(n, x_lo - window, x_hi + window) {
        let Some(first) = peak_near(&unit, x_nominal) else {
            continue;
        };
        let l = 2.0 * first.x / query.dk1;
        if !(l >= l_lo && l <= l_hi) {
            continue;
        }
        let x2 = l * query.dk2 / 2.0;
        let Some(second) = peak_near(&unit, nearest_candidate(n, x2)) else {
            continue;
        };
        let Ok(spec) = StructureSpec::new(l, n, m) else {
            continue;
        };
        let x1 = l * query.dk1 / 2.0;
        let residuals = ((x1 - first.x).abs(), (x2 - second.x).abs());
        let score = (residuals.0 / first.fwhm_x).max(residuals.1 / second.fwhm_x);
        out.push(DesignResult {
            spec,
            matched_peaks: (with_dk(first, l), with_dk(second, l)),
            residuals,
            score,
        });
    }
    out
}

/// Enumerate structures `(l, N, M)` that put `dk1` on a peak of `|Y|` and
/// score how close `dk2` lands to one.
///
/// For every `(N, M)` in range, each principal block maximum near a group
/// (the twins and their neighbouring subsidiary peaks) is refined and the
/// domain length that places the first target exactly on it is solved for.
/// Lengths outside `l_range` are dropped; otherwise the second target is
/// matched to the nearest such peak. Results are ordered by score, then
/// smaller `N`, `M` and `l`, and truncated to `max_results`.
pub fn design_search(query: &DesignQuery) -> Result<Vec<DesignResult>> {
    let mut all = design_search_all(query)?;
    all.truncate(query.max_results);
    Ok(all)
}

/// [`design_search`] without the result cap.
pub fn design_search_all(query: &DesignQuery) -> Result<Vec<DesignResult>> {
    query.validate()?;
    let pairs: Vec<(u32, u32)> = (query.n_range.0..=query.n_range.1)
        .filter(|n| query.allow_odd_n || n % 2 == 0)
        .flat_map(|n| (query.m_range.0..=query.m_range.1).map(move |m| (n, m)))
        .collect();
    let mut all: Vec<DesignResult> = pairs
        .par_iter()
        .flat_map_iter(|&(n, m)| search_pair(query, n, m))
        .collect();
    all.sort_by(DesignResult::ordering);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_are_odd_multiples_near_groups() {
        let c = candidates_in(22, 1.0, 2.0);
        let k: Vec<i64> = c.iter().map(|x| (x / (PI / 44.0)).round() as i64).collect();
        assert_eq!(k, vec![19, 21, 23, 25]);
        assert_eq!(
            (nearest_candidate(22, 4.4647) / (PI / 44.0)).round() as i64,
            63
        );
        // four-photon first target sits on the second subsidiary maximum
        assert!(candidates_in(32, 1.70, 1.73)
            .iter()
            .any(|x| (x - 35.0 * PI / 64.0).abs() < 1e-12));
    }

    #[test]
    fn validation() {
        let ok = DesignQuery::new(0.32, 0.87, (5.0, 15.0), (4, 64), (2, 16));
        assert!(ok.validate().is_ok());
        let mut q = ok.clone();
        q.dk1 = 0.0;
        assert!(q.validate().is_err());
        let mut q = ok.clone();
        q.l_range = (15.0, 5.0);
        assert!(q.validate().is_err());
        let mut q = ok.clone();
        q.n_range = (8, 4);
        assert!(q.validate().is_err());
        let mut q = ok;
        q.m_range = (0, 3);
        assert!(q.validate().is_err());
    }

    #[test]
    fn identical_targets_score_zero() {
        let q = DesignQuery::new(0.5, 0.5, (2.0, 8.0), (4, 12), (2, 6));
        let results = design_search(&q).unwrap();
        assert!(!results.is_empty());
        assert!(results[0].score < 1e-9);
        assert_eq!(results[0].matched_peaks.0.x, results[0].matched_peaks.1.x);
    }

    #[test]
    fn empty_when_no_length_fits() {
        let q = DesignQuery::new(0.32, 0.87, (100.0, 100.5), (4, 6), (2, 3));
        assert!(design_search(&q).unwrap().is_empty());
    }

    #[test]
    fn odd_n_needs_flag() {
        let mut q = DesignQuery::new(0.32, 0.87, (5.0, 15.0), (5, 5), (2, 4));
        assert!(design_search(&q).unwrap().is_empty());
        q.allow_odd_n = true;
        let r = design_search(&q).unwrap();
        assert!(r.iter().all(|d| d.spec.n() == 5));
    }

    #[test]
    fn results_are_ordered_and_capped() {
        let q = DesignQuery::new(0.32, 0.87, (5.0, 15.0), (4, 30), (2, 8));
        let r = design_search(&q).unwrap();
        assert_eq!(r.len(), DEFAULT_MAX_RESULTS);
        assert!(r
            .windows(2)
            .all(|w| w[0].ordering(&w[1]) != Ordering::Greater));
        for d in &r {
            assert!(d.score >= 0.0);
            let (x1, x2) = d.targets(&q);
            assert!(((x1 - d.matched_peaks.0.x).abs() - d.residuals.0).abs() < 1e-12);
            assert!(((x2 - d.matched_peaks.1.x).abs() - d.residuals.1).abs() < 1e-12);
        }
    }
}
