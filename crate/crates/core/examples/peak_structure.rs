//! Twin peaks, subsidiary maxima and their widths.
//!
//! `cargo run --release --example peak_structure`

use std::f64::consts::PI;

use qpm::analysis::{nominal_twins, twin_pair};
use qpm::{count_inter_twin_oscillations, find_peaks, PeakRole, StructureSpec};

fn main() -> qpm::Result<()> {
    for (n, m) in [(22, 8), (22, 9), (6, 2), (32, 13)] {
        let spec = StructureSpec::new(10.25, n, m)?;
        let (lo, hi) = twin_pair(&spec, 0)?;
        let (t_lo, t_hi) = nominal_twins(n, 0);
        println!(
            "N = {n:>2}, M = {m:>2}: twins {:.5} ({:+.4}) and {:.5} ({:+.4}); nominal {t_lo:.5}, {t_hi:.5}; FWHM {:.4}; {} maxima between",
            lo.x,
            lo.height,
            hi.x,
            hi.height,
            lo.fwhm_x,
            count_inter_twin_oscillations(&spec, 0)?
        );
    }
    let spec = StructureSpec::new(10.25, 22, 9)?;
    println!("\npeaks of |Y| for N = 22, M = 9 with |Y| > 0.05 in (0, 2pi):");
    for p in find_peaks(&spec, 0.0, 2.0 * PI)?
        .iter()
        .filter(|p| p.height.abs() > 0.05)
    {
        let role = match p.role {
            PeakRole::Twin { side } => format!("twin {side}"),
            PeakRole::Subsidiary { rank } => format!("subsidiary #{rank}"),
        };
        println!(
            "  x = {:.5}  dk = {:.5} um^-1  Y = {:+.4}  group {}  {role}",
            p.x, p.dk, p.height, p.group_index
        );
    }
    Ok(())
}
