//! Command-line flags and their merge onto a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{
    parse_range, CommandConfig, DesignConfig, JointConfig, OutputConfig, OutputFormat, RunConfig,
    SpectrumConfig, VerifyConfig,
};
use crate::cascade::CascadeKind;
use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;
use crate::spectral::SampleCount;

#[derive(Debug, Parser)]
#[command(
    name = "qpm",
    version,
    about = "Spectra, joint functions and designs of phase-reversed QPM superlattices",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Print the column order and units of every output, then exit.
    #[arg(long)]
    pub schema: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate Y(x) and G(dk) over an x window.
    Spectrum(SpectrumArgs),
    /// Tabulate the joint function h(x1, x2) on a rectangular window.
    Joint(JointArgs),
    /// Search (l, N, M) that phase-match two mismatches at once.
    Design(DesignArgs),
    /// Cross-check closed forms against the brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in scenario: triplet or four-photon.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Main output file (standard output when absent).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Format of the main output: csv, json or svg.
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,
    /// Write the merged configuration as TOML to this path.
    #[arg(long, value_name = "PATH")]
    pub save_config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StructureArgs {
    /// Domain length l in um.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    /// Domains per block N.
    #[arg(long)]
    pub n: Option<u32>,
    /// Number of blocks M.
    #[arg(long)]
    pub m: Option<u32>,
    /// Susceptibility magnitude chi0.
    #[arg(long, allow_hyphen_values = true)]
    pub chi0: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    /// Sample count or `auto`.
    #[arg(long)]
    pub samples: Option<String>,
    /// Additional SVG line plot.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct JointArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    /// x1 window `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Option<String>,
    /// x2 window `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<String>,
    /// Samples per axis.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Additional SVG heatmap.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// First mismatch in um^-1.
    #[arg(long, allow_hyphen_values = true)]
    pub dk1: Option<f64>,
    /// Second mismatch in um^-1.
    #[arg(long, allow_hyphen_values = true)]
    pub dk2: Option<f64>,
    /// Domain-length range `lo:hi` in um.
    #[arg(long)]
    pub l_range: Option<String>,
    /// Domains-per-block range `lo:hi`.
    #[arg(long)]
    pub n_range: Option<String>,
    /// Block-count range `lo:hi`.
    #[arg(long)]
    pub m_range: Option<String>,
    /// Number of designs to keep.
    #[arg(long)]
    pub max_results: Option<usize>,
    /// Include odd N, which carries no twin peaks.
    #[arg(long)]
    pub allow_odd_n: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Mismatch window `lo:hi` in um^-1.
    #[arg(long, allow_hyphen_values = true)]
    pub dk_range: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Gauss-Legendre points per domain.
    #[arg(long)]
    pub pts_per_segment: Option<usize>,
    /// Seeded random mismatches in the sum/product check.
    #[arg(long)]
    pub random_samples: Option<usize>,
    /// Truncation of the double Fourier series.
    #[arg(long)]
    pub fourier_truncation: Option<u32>,
    /// Relative error injected into the closed form.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb: Option<f64>,
}

/// Structure of a built-in scenario.
pub fn preset_structure(kind: CascadeKind) -> StructureSpec {
    match kind {
        CascadeKind::Triplet => StructureSpec::new(10.25, 22, 9),
        CascadeKind::FourPhoton => StructureSpec::new(2.2, 32, 13),
    }
    .expect("preset structures are valid")
}

fn preset_l_range(kind: CascadeKind) -> (f64, f64) {
    match kind {
        CascadeKind::Triplet => (5.0, 15.0),
        CascadeKind::FourPhoton => (1.0, 4.0),
    }
}

fn parse_preset(common: &CommonArgs) -> Result<Option<CascadeKind>> {
    common.preset.as_deref().map(str::parse).transpose()
}

/// Configuration file if given, otherwise `default`; the file must describe
/// the same command.
fn base(common: &CommonArgs, default: CommandConfig) -> Result<RunConfig> {
    let Some(path) = &common.config else {
        return Ok(RunConfig {
            structure: None,
            command: default,
            output: OutputConfig::default(),
        });
    };
    let config = RunConfig::load(path)?;
    if config.command.name() != default.name() {
        return Err(QpmError::config(
            "command",
            format!(
                "config file describes `{}`, not `{}`",
                config.command.name(),
                default.name()
            ),
        ));
    }
    Ok(config)
}

fn apply_common(config: &mut RunConfig, common: &CommonArgs) -> Result<()> {
    if let Some(out) = &common.out {
        config.output.out = Some(out.clone());
    }
    if let Some(format) = &common.format {
        config.output.format = Some(format.parse::<OutputFormat>()?);
    }
    Ok(())
}

fn apply_structure(
    config: &mut RunConfig,
    args: &StructureArgs,
    preset: Option<CascadeKind>,
) -> Result<()> {
    let start = preset.map(preset_structure).or(config.structure);
    let l = args.l.or(start.map(|s| s.l()));
    let n = args.n.or(start.map(|s| s.n()));
    let m = args.m.or(start.map(|s| s.m()));
    let chi0 = args.chi0.or(start.map(|s| s.chi0())).unwrap_or(1.0);
    match (l, n, m) {
        (Some(l), Some(n), Some(m)) => {
            config.structure = Some(StructureSpec::with_chi0(l, n, m, chi0)?);
            Ok(())
        }
        (None, None, None) => Ok(()),
        (l, n, _) => {
            let missing = if l.is_none() {
                "l"
            } else if n.is_none() {
                "n"
            } else {
                "m"
            };
            Err(QpmError::config(missing, "structure needs l, n and m"))
        }
    }
}

impl Command {
    /// Merge the flags onto the configuration file (or defaults).
    pub fn to_config(&self) -> Result<RunConfig> {
        match self {
            Command::Spectrum(a) => {
                let mut config = base(
                    &a.common,
                    CommandConfig::Spectrum(SpectrumConfig::default()),
                )?;
                apply_structure(&mut config, &a.structure, parse_preset(&a.common)?)?;
                apply_common(&mut config, &a.common)?;
                if let CommandConfig::Spectrum(c) = &mut config.command {
                    c.x_min = a.x_min.unwrap_or(c.x_min);
                    c.x_max = a.x_max.unwrap_or(c.x_max);
                    if let Some(s) = &a.samples {
                        c.samples = s.parse::<SampleCount>()?;
                    }
                }
                if let Some(svg) = &a.svg {
                    config.output.svg = Some(svg.clone());
                }
                Ok(config)
            }
            Command::Joint(a) => {
                let mut config = base(&a.common, CommandConfig::Joint(JointConfig::default()))?;
                apply_structure(&mut config, &a.structure, parse_preset(&a.common)?)?;
                apply_common(&mut config, &a.common)?;
                if let CommandConfig::Joint(c) = &mut config.command {
                    if let Some(r) = &a.x1 {
                        c.x1 = parse_range("x1", r)?;
                    }
                    if let Some(r) = &a.x2 {
                        c.x2 = parse_range("x2", r)?;
                    }
                    if let Some(n) = a.samples {
                        c.samples1 = n;
                        c.samples2 = n;
                    }
                }
                if let Some(svg) = &a.svg {
                    config.output.svg = Some(svg.clone());
                }
                Ok(config)
            }
            Command::Design(a) => {
                let mut config = base(&a.common, CommandConfig::Design(DesignConfig::default()))?;
                apply_common(&mut config, &a.common)?;
                let preset = parse_preset(&a.common)?;
                if let CommandConfig::Design(c) = &mut config.command {
                    if let Some(kind) = preset {
                        c.preset = Some(kind);
                        c.l_range = preset_l_range(kind);
                    }
                    c.dk1 = a.dk1.or(c.dk1);
                    c.dk2 = a.dk2.or(c.dk2);
                    if let Some(r) = &a.l_range {
                        c.l_range = parse_range("l_range", r)?;
                    }
                    if let Some(r) = &a.n_range {
                        c.n_range = parse_range("n_range", r)?;
                    }
                    if let Some(r) = &a.m_range {
                        c.m_range = parse_range("m_range", r)?;
                    }
                    c.max_results = a.max_results.unwrap_or(c.max_results);
                    c.allow_odd_n |= a.allow_odd_n;
                }
                Ok(config)
            }
            Command::Verify(a) => {
                let mut config = base(&a.common, CommandConfig::Verify(VerifyConfig::default()))?;
                apply_structure(&mut config, &a.structure, parse_preset(&a.common)?)?;
                apply_common(&mut config, &a.common)?;
                if let CommandConfig::Verify(c) = &mut config.command {
                    if let Some(r) = &a.dk_range {
                        c.dk_range = parse_range("dk_range", r)?;
                    }
                    c.samples = a.samples.unwrap_or(c.samples);
                    c.pts_per_segment = a.pts_per_segment.unwrap_or(c.pts_per_segment);
                    c.random_samples = a.random_samples.unwrap_or(c.random_samples);
                    c.fourier_truncation = a.fourier_truncation.unwrap_or(c.fourier_truncation);
                    c.perturbation = a.perturb.unwrap_or(c.perturbation);
                }
                Ok(config)
            }
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a) => &a.common,
            Command::Joint(a) => &a.common,
            Command::Design(a) => &a.common,
            Command::Verify(a) => &a.common,
        }
    }
}
