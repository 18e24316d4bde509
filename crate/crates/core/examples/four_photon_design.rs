//! Double phase matching of the four-photon cascade (dk1 = 1.56, dk2 = -1.312 um^-1).
//!
//! `cargo run --release --example four_photon_design`

use std::f64::consts::PI;

use qpm::analysis::{design_search_all, peak_near};
use qpm::cascade::CascadeKind;
use qpm::{find_peaks, CascadeScenario, DesignQuery, StructureSpec};

fn main() -> qpm::Result<()> {
    let scenario = CascadeScenario::preset(CascadeKind::FourPhoton);
    let spec = StructureSpec::new(2.2, 32, 13)?;
    let (x1, x2) = (spec.x_of_dk(scenario.dk1), spec.x_of_dk(scenario.dk2));
    let p1 = peak_near(&spec, 35.0 * PI / 64.0).expect("subsidiary peak");
    println!("reference structure l = 2.2 um, N = 32, M = 13");
    println!(
        "  x1 = {x1:.5} vs subsidiary peak {:.5} (35pi/64 = {:.5}): {:.3}%",
        p1.x,
        35.0 * PI / 64.0,
        100.0 * (x1 - p1.x).abs() / p1.x
    );
    let negative = find_peaks(&spec, -PI, 0.0)?;
    let p2 = negative
        .iter()
        .min_by(|a, b| (a.x - x2).abs().total_cmp(&(b.x - x2).abs()))
        .expect("negative branch has peaks");
    println!(
        "  x2 = {x2:.5} vs negative-branch peak {:.5} (Y = {:+.4}): {:.3}%",
        p2.x,
        p2.height,
        100.0 * (x2 - p2.x).abs() / p2.x.abs()
    );

    let query = DesignQuery::new(scenario.dk1, scenario.dk2, (1.0, 5.0), (4, 64), (2, 20));
    let all = design_search_all(&query)?;
    println!(
        "\n{} candidate designs over l in 1..5, N in 4..64, M in 2..20; best five:",
        all.len()
    );
    for d in all.iter().take(5) {
        println!(
            "  l = {:.4}  N = {:>2}  M = {:>2}  score = {:.3e}",
            d.spec.l(),
            d.spec.n(),
            d.spec.m(),
            d.score
        );
    }
    if let Some(rank) = all
        .iter()
        .position(|d| d.spec.n() == 32 && d.spec.m() == 13 && (d.spec.l() / 2.2 - 1.0).abs() < 0.02)
    {
        let d = &all[rank];
        println!(
            "reference-like design l = {:.4}, N = 32, M = 13: rank {}, score {:.3}",
            d.spec.l(),
            rank + 1,
            d.score
        );
    }
    Ok(())
}
