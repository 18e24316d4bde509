//! Joint function h(x1, x2) near the first twin pair and one group higher.
//!
//! `cargo run --release --example joint_window [OUT_DIR]`

use std::path::PathBuf;

use qpm::analysis::twin_pair;
use qpm::cli::svg::heatmap;
use qpm::{joint_h, JointGrid, StructureSpec};

fn main() -> qpm::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "target/qpm-examples".into()),
    );
    std::fs::create_dir_all(&dir).expect("output directory");
    for m in [8, 9] {
        let spec = StructureSpec::new(10.25, 22, m)?;
        let (a, b) = twin_pair(&spec, 0)?;
        println!(
            "N = 22, M = {m}: twins at x = {:.5} ({:+.4}) and {:.5} ({:+.4})",
            a.x, a.height, b.x, b.height
        );
        for (x1, x2) in [(a.x, a.x), (a.x, b.x), (b.x, a.x), (b.x, b.x)] {
            println!("  h({x1:.4}, {x2:.4}) = {:+.1}", joint_h(x1, x2, &spec));
        }
        let near = JointGrid::compute(&spec, (1.0, 2.0), (1.0, 2.0), 201, 201)?;
        let far = JointGrid::compute(&spec, (4.2, 5.0), (1.0, 2.0), 201, 201)?;
        println!(
            "  max|h| (1,2)x(1,2) = {:.1}, (4.2,5)x(1,2) = {:.1}, ratio {:.3}",
            near.max_abs(),
            far.max_abs(),
            far.max_abs() / near.max_abs()
        );
        println!("  oracle spot check: {:.2e}", near.spot_check(97)?);
        for (tag, grid) in [("near", &near), ("far", &far)] {
            let path = dir.join(format!("joint_m{m}_{tag}.svg"));
            let title = format!("h(x1, x2), N = 22, M = {m}");
            std::fs::write(
                &path,
                heatmap(&title, &grid.x1_axis, &grid.x2_axis, &grid.h),
            )
            .expect("write svg");
            std::fs::write(dir.join(format!("joint_m{m}_{tag}.csv")), grid.to_csv())
                .expect("write csv");
        }
    }
    println!("written to {}", dir.display());
    Ok(())
}
