//! Double phase matching of the photon-triplet cascade (dk1 = 0.32, dk2 = 0.87 um^-1).
//!
//! `cargo run --release --example triplet_design`

use std::f64::consts::PI;

use qpm::analysis::{design_search_all, twin_pair};
use qpm::cascade::CascadeKind;
use qpm::{
    coupling_constants, design_search, find_peaks, CascadeScenario, DesignQuery, StructureSpec,
};

fn main() -> qpm::Result<()> {
    let scenario = CascadeScenario::preset(CascadeKind::Triplet);
    let spec = StructureSpec::new(10.25, 22, 9)?;
    let (x1, x2) = (spec.x_of_dk(scenario.dk1), spec.x_of_dk(scenario.dk2));
    let (_, twin) = twin_pair(&spec, 0)?;
    println!("reference structure l = 10.25 um, N = 22, M = 9");
    println!(
        "  x1 = {x1:.5} vs twin {:.5}: residual {:.2e} = {:.3} FWHM",
        twin.x,
        (x1 - twin.x).abs(),
        (x1 - twin.x).abs() / twin.fwhm_x
    );
    let group1 = find_peaks(&spec, PI, 2.0 * PI)?;
    let near = group1
        .iter()
        .min_by(|a, b| (a.x - x2).abs().total_cmp(&(b.x - x2).abs()))
        .expect("group has peaks");
    println!(
        "  x2 = {x2:.5} vs nearest peak {:.5} ({:?}): residual {:.2e} = {:.3} FWHM",
        near.x,
        near.role,
        (x2 - near.x).abs(),
        (x2 - near.x).abs() / near.fwhm_x
    );
    let (zeta, xi) = coupling_constants(&scenario, &spec);
    println!(
        "  |zeta| = {:.2} um, |xi| = {:.2} um (L = {:.2} um)",
        zeta.norm(),
        xi.norm(),
        spec.total_length()
    );

    let query = DesignQuery::new(scenario.dk1, scenario.dk2, (5.0, 15.0), (4, 64), (2, 16));
    println!("\nbest designs over l in 5..15, N in 4..64, M in 2..16:");
    for (i, d) in design_search(&query)?.iter().take(10).enumerate() {
        println!(
            "  {:>2}. l = {:8.4}  N = {:>2}  M = {:>2}  score = {:.3e}",
            i + 1,
            d.spec.l(),
            d.spec.n(),
            d.spec.m(),
            d.score
        );
    }
    let all = design_search_all(&query)?;
    if let Some(rank) = all.iter().position(|d| {
        d.spec.n() == 22 && d.spec.m() == 9 && (d.spec.l() / 10.25 - 1.0).abs() < 0.02
    }) {
        let d = &all[rank];
        println!(
            "reference-like design l = {:.4}, N = 22, M = 9 ranks {} of {} with score {:.3}",
            d.spec.l(),
            rank + 1,
            all.len(),
            d.score
        );
    }
    Ok(())
}
