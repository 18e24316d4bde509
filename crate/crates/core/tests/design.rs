use qpm::analysis::design_search_all;
use qpm::*;

fn rank_of(all: &[DesignResult], l: f64, n: u32, m: u32) -> Option<usize> {
    all.iter()
        .position(|d| d.spec.n() == n && d.spec.m() == m && (d.spec.l() / l - 1.0).abs() < 0.02)
}

#[test]
fn triplet_search_contains_reference_design() {
    let q = DesignQuery::new(0.32, 0.87, (5.0, 15.0), (4, 64), (2, 16));
    let all = design_search_all(&q).unwrap();
    let rank = rank_of(&all, 10.25, 22, 9).expect("reference design is a candidate");
    let d = &all[rank];
    assert!(d.residuals.0 < 1e-12, "first target sits on its peak");
    assert!(d.score.is_finite());
}

#[test]
fn four_photon_search_contains_reference_design() {
    let q = DesignQuery::new(1.56, -1.312, (1.0, 5.0), (4, 64), (2, 20));
    let all = design_search_all(&q).unwrap();
    let rank = rank_of(&all, 2.2, 32, 13).expect("reference design is a candidate");
    let d = &all[rank];
    assert!(d.matched_peaks.1.x < 0.0);
    assert!(d.residuals.1 < 0.02 * d.matched_peaks.1.x.abs());
}

#[test]
fn equal_targets_share_a_peak() {
    let q = DesignQuery::new(0.7, 0.7, (2.0, 8.0), (4, 16), (2, 6));
    let best = &design_search(&q).unwrap()[0];
    assert!(best.score < 1e-9);
}

#[test]
fn search_is_capped_and_sorted() {
    let mut q = DesignQuery::new(0.32, 0.87, (5.0, 15.0), (4, 64), (2, 16));
    q.max_results = 7;
    let r = design_search(&q).unwrap();
    assert_eq!(r.len(), 7);
    assert!(r.windows(2).all(|w| w[0].score <= w[1].score));
    assert!(r.iter().all(|d| d.spec.n() % 2 == 0));
}
