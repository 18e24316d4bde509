//! Spectra of the four reference structures as CSV plus SVG line plots.
//!
//! `cargo run --release --example spectrum_figures [OUT_DIR]`

use std::path::PathBuf;

use qpm::cli::config::{CommandConfig, OutputConfig, SpectrumConfig};
use qpm::cli::{run_spectrum, RunConfig};
use qpm::spectral::SampleCount;
use qpm::StructureSpec;

fn main() -> qpm::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "target/qpm-examples".into()),
    );
    std::fs::create_dir_all(&dir).expect("output directory");
    let cases = [
        ("opposite_twins", 10.25, 22, 8),
        ("same_twins", 10.25, 22, 9),
        ("broad_peaks", 10.25, 6, 2),
        ("four_photon", 2.2, 32, 13),
        ("plain_sinc", 10.25, 1, 1),
    ];
    for (name, l, n, m) in cases {
        let config = RunConfig {
            structure: Some(StructureSpec::new(l, n, m)?),
            command: CommandConfig::Spectrum(SpectrumConfig {
                x_min: 0.0,
                x_max: 7.0,
                samples: SampleCount::AUTO,
            }),
            output: OutputConfig {
                out: Some(dir.join(format!("{name}.csv"))),
                format: None,
                svg: Some(dir.join(format!("{name}.svg"))),
            },
        };
        let grid = run_spectrum(&config)?;
        let peak = grid.samples.iter().map(|s| s.y.abs()).fold(0.0, f64::max);
        println!(
            "{name:>15}: l = {l}, N = {n}, M = {m}, {} samples, max |Y| = {peak:.4}",
            grid.samples.len()
        );
    }
    println!("written to {}", dir.display());
    Ok(())
}
