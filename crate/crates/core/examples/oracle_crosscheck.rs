//! Closed form against the segment sum and Gauss-Legendre quadrature.
//!
//! `cargo run --release --example oracle_crosscheck`

use std::time::Instant;

use qpm::oracle::verify_grid_with;
use qpm::{verify_grid, StructureSpec};

fn main() -> qpm::Result<()> {
    let cases = [
        (10.25, 22, 9, 0.0, 1.0),
        (2.2, 32, 13, -1.5, 1.6),
        (1.0, 3, 4, 0.0, 4.0),
        (1.5, 1, 1, -2.0, 2.0),
    ];
    for (l, n, m, lo, hi) in cases {
        let spec = StructureSpec::new(l, n, m)?;
        let start = Instant::now();
        let sweep = verify_grid(&spec, lo, hi, 2048)?;
        println!(
            "l = {l:5}, N = {n:>2}, M = {m:>2}, dk in [{lo}, {hi}]: closed vs sum {:.2e}, sum vs quadrature {:.2e} ({:.0} ms)",
            sweep.max_dev_closed_vs_sum,
            sweep.max_dev_sum_vs_quad,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    let spec = StructureSpec::new(10.25, 22, 9)?;
    for pts in [8, 12, 16] {
        let sweep = verify_grid_with(&spec, 0.0, 1.0, 256, pts, 0.0)?;
        println!(
            "{pts:>2} quadrature points per domain: sum vs quadrature {:.2e}",
            sweep.max_dev_sum_vs_quad
        );
    }
    let perturbed = verify_grid_with(&spec, 0.0, 1.0, 256, 16, 1e-6)?;
    println!(
        "closed form perturbed by 1e-6: closed vs sum {:.2e}",
        perturbed.max_dev_closed_vs_sum
    );
    Ok(())
}
