use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;
use crate::spectral::{y_log_derivative, y_of_x};

/// Scan density of [`find_peaks`]: samples per `π/(MN)` in `x`.
pub const SCAN_SAMPLES_PER_FEATURE: f64 = 25.0;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const GOLDEN_TOLERANCE: f64 = 1e-9;
const MAX_WIDTH_STEPS: usize = 200_000;

/// Position of a peak inside its π-period group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PeakRole {
    /// One of the two narrow peaks flanking the group centre; side 0 is the
    /// lower-`x` peak.
    Twin { side: u8 },
    /// Any other maximum; rank 1 is the tallest non-twin peak of the group.
    Subsidiary { rank: u32 },
}

/// A refined local maximum of `|Y_{M,N}|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub x: f64,
    /// Same position as a mismatch, μm⁻¹.
    pub dk: f64,
    /// Signed value of `Y` at the peak.
    pub height: f64,
    /// Full width at half of `|height|`, in `x`.
    pub fwhm_x: f64,
    /// `g` for the group centred on `π/2 + g·π`.
    pub group_index: i64,
    pub role: PeakRole,
}

impl Peak {
    pub fn is_twin(&self) -> bool {
        matches!(self.role, PeakRole::Twin { .. })
    }
}

/// Centre `π/2 + g·π` of group `g`.
pub fn group_centre(group: i64) -> f64 {
    FRAC_PI_2 + group as f64 * PI
}

/// Group whose centre is nearest to `x`.
pub fn group_of(x: f64) -> i64 {
    ((x - FRAC_PI_2) / PI).round() as i64
}

/// Nominal twin positions `π/2 + gπ ∓ π/(2N)`.
pub fn nominal_twins(n: u32, group: i64) -> (f64, f64) {
    let c = group_centre(group);
    let off = PI / (2.0 * f64::from(n));
    (c - off, c + off)
}

/// Width `π/(MN)` in `x` of the narrowest spectral features.
pub fn feature_width(n: u32, m: u32) -> f64 {
    PI / (f64::from(n) * f64::from(m))
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > GOLDEN_TOLERANCE * (1.0 + a.abs().max(b.abs())) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b), a, b)
}

/// Golden-section search for the maximum of `|Y|` on `[lo, hi]`, polished by
/// bisection on the analytic log-derivative.
pub fn refine_peak(n: u32, m: u32, lo: f64, hi: f64) -> f64 {
    let abs_y = |x: f64| y_of_x(x, n, m).abs();
    let (x_golden, _, _) = golden_max(abs_y, lo, hi);
    let pad = feature_width(n, m) / SCAN_SAMPLES_PER_FEATURE;
    let mut a = (x_golden - pad).max(lo);
    let mut b = (x_golden + pad).min(hi);
    let slope = |x: f64| y_log_derivative(x, n, m);
    if !(slope(a) > 0.0 && slope(b) < 0.0) {
        return x_golden;
    }
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return mid;
        }
        let s = slope(mid);
        if s > 0.0 {
            a = mid;
        } else if s < 0.0 {
            b = mid;
        } else {
            return mid;
        }
    }
}

/// Bisect for the point between `inside` and `outside` where `|Y|` crosses `level`.
fn crossing(n: u32, m: u32, mut inside: f64, mut outside: f64, level: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (inside + outside);
        if y_of_x(mid, n, m).abs() >= level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Walk away from the peak until `|Y|` drops below half height, changes sign
/// or starts rising again; returns the edge position.
fn half_width_edge(n: u32, m: u32, x_peak: f64, height: f64, step: f64) -> f64 {
    let level = height.abs() / 2.0;
    let mut prev_x = x_peak;
    let mut prev_v = height.abs();
    for k in 1..=MAX_WIDTH_STEPS {
        let x = x_peak + step * k as f64;
        let y = y_of_x(x, n, m);
        let v = y.abs();
        if y.signum() != height.signum() || v < level {
            return crossing(n, m, prev_x, x, level);
        }
        if v > prev_v {
            return prev_x;
        }
        prev_x = x;
        prev_v = v;
    }
    prev_x
}

pub(crate) fn peak_width(n: u32, m: u32, x_peak: f64, height: f64) -> f64 {
    let step = feature_width(n, m) / (4.0 * SCAN_SAMPLES_PER_FEATURE);
    let right = half_width_edge(n, m, x_peak, height, step);
    let left = half_width_edge(n, m, x_peak, height, -step);
    (right - left).max(f64::EPSILON * (1.0 + x_peak.abs()))
}

/// Locate and refine every local maximum of `|Y_{M,N}|` in `(x_min, x_max)`.
///
/// The window is scanned at [`SCAN_SAMPLES_PER_FEATURE`] samples per
/// `π/(MN)`. Each interior sample that beats its neighbours, with all three
/// of the same sign, is refined by [`refine_peak`]. Peaks come back sorted by
/// position. In every group whose nominal twin positions lie inside the
/// window, the tallest peak on each side of the centre within `2π/N` is
/// labelled as a twin (only when `M >= 2`).
pub fn find_peaks(spec: &StructureSpec, x_min: f64, x_max: f64) -> Result<Vec<Peak>> {
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(QpmError::domain(format!(
            "peak window ({x_min}, {x_max}) is empty"
        )));
    }
    let (n, m) = (spec.n(), spec.m());
    let feature = feature_width(n, m);
    let intervals = (((x_max - x_min) / feature) * SCAN_SAMPLES_PER_FEATURE)
        .ceil()
        .max(SCAN_SAMPLES_PER_FEATURE) as usize;
    let step = (x_max - x_min) / intervals as f64;
    let xs: Vec<f64> = (0..=intervals).map(|i| x_min + step * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| y_of_x(x, n, m)).collect();

    let mut peaks = Vec::new();
    for i in 1..intervals {
        let (a, b, c) = (ys[i - 1], ys[i], ys[i + 1]);
        let same_sign = a.signum() == b.signum() && b.signum() == c.signum() && b != 0.0;
        if same_sign && b.abs() >= a.abs() && b.abs() > c.abs() {
            let x = refine_peak(n, m, xs[i - 1], xs[i + 1]);
            let height = y_of_x(x, n, m);
            peaks.push(Peak {
                x,
                dk: spec.dk_of_x(x),
                height,
                fwhm_x: peak_width(n, m, x, height),
                group_index: group_of(x),
                role: PeakRole::Subsidiary { rank: 0 },
            });
        }
    }
    label_groups(&mut peaks, n, m, x_min, x_max);
    Ok(peaks)
}

fn label_groups(peaks: &mut [Peak], n: u32, m: u32, x_min: f64, x_max: f64) {
    let span = 2.0 * PI / f64::from(n);
    let groups: std::collections::BTreeSet<i64> = peaks.iter().map(|p| p.group_index).collect();
    for g in groups {
        let c = group_centre(g);
        let (t_lo, t_hi) = nominal_twins(n, g);
        if m >= 2 && t_lo > x_min && t_hi < x_max {
            let tallest = |range: (f64, f64), peaks: &[Peak]| {
                peaks
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.x > range.0 && p.x < range.1)
                    .max_by(|a, b| a.1.height.abs().total_cmp(&b.1.height.abs()))
                    .map(|(i, _)| i)
            };
            let left = tallest((c - span, c), peaks);
            let right = tallest((c, c + span), peaks);
            if let (Some(l), Some(r)) = (left, right) {
                peaks[l].role = PeakRole::Twin { side: 0 };
                peaks[r].role = PeakRole::Twin { side: 1 };
            }
        }
        let mut others: Vec<usize> = (0..peaks.len())
            .filter(|&i| peaks[i].group_index == g && !peaks[i].is_twin())
            .collect();
        others.sort_by(|&a, &b| {
            peaks[b]
                .height
                .abs()
                .total_cmp(&peaks[a].height.abs())
                .then(peaks[a].x.total_cmp(&peaks[b].x))
        });
        for (rank, i) in others.into_iter().enumerate() {
            peaks[i].role = PeakRole::Subsidiary {
                rank: rank as u32 + 1,
            };
        }
    }
}

/// The twin pair of `group`, if the structure has one.
pub fn twin_pair(spec: &StructureSpec, group: i64) -> Result<(Peak, Peak)> {
    let n = spec.n();
    let c = group_centre(group);
    let reach = 2.0 * PI / f64::from(n) + feature_width(n, spec.m());
    let peaks = find_peaks(spec, c - reach, c + reach)?;
    let side = |s: u8| {
        peaks
            .iter()
            .find(|p| p.group_index == group && p.role == PeakRole::Twin { side: s })
            .copied()
    };
    match (side(0), side(1)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(QpmError::TwinNotFound { group }),
    }
}

/// Number of local maxima of `|Y|` strictly between the twins of `group`.
///
/// A single block (`M = 1`) has no twin structure and yields 0.
pub fn count_inter_twin_oscillations(spec: &StructureSpec, group: i64) -> Result<usize> {
    if spec.m() == 1 {
        return Ok(0);
    }
    let (lo, hi) = twin_pair(spec, group)?;
    let peaks = find_peaks(
        spec,
        lo.x - feature_width(spec.n(), spec.m()),
        hi.x + feature_width(spec.n(), spec.m()),
    )?;
    Ok(peaks.iter().filter(|p| p.x > lo.x && p.x < hi.x).count())
}

/// Refined peak nearest to `x_nominal`, searched within one feature width.
pub fn peak_near(spec: &StructureSpec, x_nominal: f64) -> Option<Peak> {
    let w = feature_width(spec.n(), spec.m());
    find_peaks(spec, x_nominal - w, x_nominal + w)
        .ok()?
        .into_iter()
        .min_by(|a, b| (a.x - x_nominal).abs().total_cmp(&(b.x - x_nominal).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, m: u32) -> StructureSpec {
        StructureSpec::new(10.25, n, m).unwrap()
    }

    #[test]
    fn rejects_empty_window() {
        assert!(find_peaks(&spec(22, 9), 2.0, 1.0).is_err());
        assert!(find_peaks(&spec(22, 9), 1.0, 1.0).is_err());
        assert!(find_peaks(&spec(22, 9), f64::NAN, 1.0).is_err());
    }

    #[test]
    fn twins_for_m9_and_m8() {
        // mpmath maxima of |Y|: (22,9) 1.50040853772692, 1.64108822783299
        //                       (22,8) 1.50067339077138, 1.64079845547222
        for (m, lo, hi, same_sign) in [
            (9, 1.500_408_537_726_92, 1.641_088_227_832_99, true),
            (8, 1.500_673_390_771_38, 1.640_798_455_472_22, false),
        ] {
            let peaks = find_peaks(&spec(22, m), 1.0, 2.0).unwrap();
            let twins: Vec<_> = peaks.iter().filter(|p| p.is_twin()).collect();
            assert_eq!(twins.len(), 2);
            assert!((twins[0].x - lo).abs() < 1e-10, "{}", twins[0].x);
            assert!((twins[1].x - hi).abs() < 1e-10, "{}", twins[1].x);
            assert_eq!(twins[0].height * twins[1].height > 0.0, same_sign);
            assert_eq!(twins[0].group_index, 0);
            for p in &peaks {
                assert!(p.height.abs() <= 1.0 && p.fwhm_x > 0.0);
            }
        }
    }

    #[test]
    fn peaks_sorted_and_positions_independent_of_l() {
        let a = find_peaks(&StructureSpec::new(1.0, 6, 2).unwrap(), 0.2, 5.0).unwrap();
        let b = find_peaks(&StructureSpec::new(7.5, 6, 2).unwrap(), 0.2, 5.0).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(a.windows(2).all(|w| w[0].x < w[1].x));
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.x, q.x);
            assert!((q.dk - 2.0 * q.x / 7.5).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_is_idempotent() {
        let s = spec(22, 9);
        let h = feature_width(22, 9) / SCAN_SAMPLES_PER_FEATURE;
        for p in find_peaks(&s, 0.5, 5.0).unwrap() {
            let again = refine_peak(22, 9, p.x - h, p.x + h);
            assert!((again - p.x).abs() < 1e-10, "{} -> {}", p.x, again);
        }
    }

    #[test]
    fn small_structure_has_wider_twins() {
        let wide = find_peaks(&spec(6, 2), 1.0, 2.0).unwrap();
        let narrow = find_peaks(&spec(22, 8), 1.0, 2.0).unwrap();
        let w = |ps: &[Peak]| ps.iter().find(|p| p.is_twin()).unwrap().fwhm_x;
        let ratio = w(&wide) / w(&narrow);
        // total lengths differ by 176/12 ≈ 14.7
        assert!(ratio > 8.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn inter_twin_counts() {
        let c8 = count_inter_twin_oscillations(&spec(22, 8), 0).unwrap();
        let c2 = count_inter_twin_oscillations(&spec(6, 2), 0).unwrap();
        let c9 = count_inter_twin_oscillations(&spec(22, 9), 0).unwrap();
        let c3 = count_inter_twin_oscillations(&spec(22, 3), 0).unwrap();
        assert!(c8 > c2, "{c8} vs {c2}");
        assert!(c9 >= c3);
        assert_eq!(count_inter_twin_oscillations(&spec(22, 1), 0).unwrap(), 0);
        let mut last = 0;
        for m in 2..=12 {
            let c = count_inter_twin_oscillations(&spec(22, m), 0).unwrap();
            assert!(c >= last, "m={m}: {c} < {last}");
            last = c;
        }
    }

    #[test]
    fn twin_pair_found_in_other_groups() {
        let (a, b) = twin_pair(&spec(22, 9), 1).unwrap();
        let (na, nb) = nominal_twins(22, 1);
        assert!((a.x - na).abs() < PI / (4.0 * 198.0));
        assert!((b.x - nb).abs() < PI / (4.0 * 198.0));
        let (a, _) = twin_pair(&spec(32, 13), -1).unwrap();
        assert!(a.x < 0.0);
    }
}
