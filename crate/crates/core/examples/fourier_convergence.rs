//! Truncated double Fourier series approaching the closed form at the twins.
//!
//! `cargo run --release --example fourier_convergence`

use qpm::analysis::twin_pair;
use qpm::spectral::FOURIER_PHASE;
use qpm::{fourier_pheno, g_effective, StructureSpec};

fn main() -> qpm::Result<()> {
    for (n, m) in [(22, 9), (100, 50)] {
        let spec = StructureSpec::new(1.0, n, m)?;
        let (a, b) = twin_pair(&spec, 0)?;
        println!("N = {n}, M = {m}, twins at x = {:.5}, {:.5}", a.x, b.x);
        for order in [1u32, 5, 21, 51, 101, 201, 401] {
            let worst = [a, b]
                .iter()
                .map(|p| {
                    let closed = g_effective(p.dk, &spec);
                    let series = fourier_pheno(p.dk, &spec, order, order).expect("order >= 1");
                    (series - FOURIER_PHASE * closed).norm() / closed.norm()
                })
                .fold(0.0, f64::max);
            println!(
                "  |n|, |m| <= {order:>3}: max relative deviation {:.3}%",
                worst * 100.0
            );
        }
    }
    Ok(())
}
