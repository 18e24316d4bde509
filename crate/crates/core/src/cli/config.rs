//! Run configuration: a TOML document mirroring every command-line flag.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::DEFAULT_MAX_RESULTS;
use crate::cascade::CascadeKind;
use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;
use crate::oracle::DEFAULT_POINTS_PER_SEGMENT;
use crate::spectral::{SampleCount, DEFAULT_FOURIER_TRUNCATION};

/// Default number of joint-grid samples per axis.
pub const DEFAULT_JOINT_SAMPLES: usize = 161;
/// Default number of verification samples.
pub const DEFAULT_VERIFY_SAMPLES: usize = 2048;
/// Default number of seeded random mismatches in the sum/product check.
pub const DEFAULT_RANDOM_SAMPLES: usize = 1000;

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = QpmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(QpmError::config(
                "format",
                format!("expected csv, json or svg, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: SampleCount,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            x_min: 0.0,
            x_max: 7.0,
            samples: SampleCount::AUTO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointConfig {
    pub x1: (f64, f64),
    pub x2: (f64, f64),
    pub samples1: usize,
    pub samples2: usize,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig {
            x1: (1.0, 2.0),
            x2: (1.0, 2.0),
            samples1: DEFAULT_JOINT_SAMPLES,
            samples2: DEFAULT_JOINT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<CascadeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dk1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dk2: Option<f64>,
    pub l_range: (f64, f64),
    pub n_range: (u32, u32),
    pub m_range: (u32, u32),
    pub max_results: usize,
    #[serde(default)]
    pub allow_odd_n: bool,
}

impl Default for DesignConfig {
    fn default() -> Self {
        DesignConfig {
            preset: None,
            dk1: None,
            dk2: None,
            l_range: (5.0, 15.0),
            n_range: (4, 64),
            m_range: (2, 16),
            max_results: DEFAULT_MAX_RESULTS,
            allow_odd_n: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub dk_range: (f64, f64),
    pub samples: usize,
    pub pts_per_segment: usize,
    pub random_samples: usize,
    pub fourier_truncation: u32,
    /// Relative error injected into the closed form (negative control).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub perturbation: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dk_range: (0.0, 1.0),
            samples: DEFAULT_VERIFY_SAMPLES,
            pts_per_segment: DEFAULT_POINTS_PER_SEGMENT,
            random_samples: DEFAULT_RANDOM_SAMPLES,
            fourier_truncation: DEFAULT_FOURIER_TRUNCATION,
            perturbation: 0.0,
        }
    }
}

/// The single command a configuration runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CommandConfig {
    Spectrum(SpectrumConfig),
    Joint(JointConfig),
    Design(DesignConfig),
    Verify(VerifyConfig),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Spectrum(_) => "spectrum",
            CommandConfig::Joint(_) => "joint",
            CommandConfig::Design(_) => "design",
            CommandConfig::Verify(_) => "verify",
        }
    }

    fn default_format(&self) -> OutputFormat {
        match self {
            CommandConfig::Spectrum(_) | CommandConfig::Joint(_) => OutputFormat::Csv,
            CommandConfig::Design(_) | CommandConfig::Verify(_) => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Main output file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// Additional SVG figure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
    pub command: CommandConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn check_range(field: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QpmError::config(
            field,
            format!("range {lo}:{hi} is not well ordered"),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .unwrap_or("config")
                .to_string();
            QpmError::config(field, e.message().trim().to_string())
        })?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| QpmError::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| QpmError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Format of the main output, defaulting per command.
    pub fn format(&self) -> OutputFormat {
        self.output
            .format
            .unwrap_or_else(|| self.command.default_format())
    }

    /// The structure, or a configuration error naming it.
    pub fn require_structure(&self) -> Result<StructureSpec> {
        self.structure
            .ok_or_else(|| QpmError::config("structure", "l, n and m are required"))
    }

    /// Check windows, sample counts and that the format suits the command.
    pub fn validate(&self) -> Result<()> {
        let format = self.format();
        match &self.command {
            CommandConfig::Spectrum(c) => {
                self.require_structure()?;
                check_range("x_min/x_max", (c.x_min, c.x_max))?;
                if let SampleCount::Fixed(n) = c.samples {
                    if n < 2 {
                        return Err(QpmError::config("samples", "need at least 2"));
                    }
                }
            }
            CommandConfig::Joint(c) => {
                self.require_structure()?;
                for (name, (lo, hi), n) in [("x1", c.x1, c.samples1), ("x2", c.x2, c.samples2)] {
                    if n == 0 {
                        return Err(QpmError::config(name, "need at least 1 sample"));
                    }
                    if n == 1 {
                        if !lo.is_finite() {
                            return Err(QpmError::config(name, "bound is not finite"));
                        }
                    } else {
                        check_range(name, (lo, hi))?;
                    }
                }
            }
            CommandConfig::Design(c) => {
                if c.preset.is_none() && (c.dk1.is_none() || c.dk2.is_none()) {
                    return Err(QpmError::config(
                        "dk1/dk2",
                        "give both mismatches or a preset",
                    ));
                }
                if format == OutputFormat::Svg {
                    return Err(QpmError::config("format", "design writes csv or json"));
                }
            }
            CommandConfig::Verify(c) => {
                self.require_structure()?;
                check_range("dk_range", c.dk_range)?;
                if c.samples < 2 {
                    return Err(QpmError::config("samples", "need at least 2"));
                }
                if c.pts_per_segment < 8 {
                    return Err(QpmError::config("pts_per_segment", "need at least 8"));
                }
                if c.fourier_truncation == 0 {
                    return Err(QpmError::config("fourier_truncation", "must be at least 1"));
                }
                if format != OutputFormat::Json {
                    return Err(QpmError::config("format", "verify writes json"));
                }
            }
        }
        Ok(())
    }
}

/// Parse `lo:hi`.
pub fn parse_range<T: std::str::FromStr>(field: &str, text: &str) -> Result<(T, T)> {
    let bad = || QpmError::config(field, format!("expected `lo:hi`, got `{text}`"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunConfig {
        RunConfig {
            structure: Some(StructureSpec::new(10.25, 22, 9).unwrap()),
            command: CommandConfig::Spectrum(SpectrumConfig::default()),
            output: OutputConfig {
                out: Some("spec.csv".into()),
                format: None,
                svg: Some("spec.svg".into()),
            },
        }
    }

    #[test]
    fn round_trip_every_command() {
        let commands = [
            CommandConfig::Spectrum(SpectrumConfig {
                samples: SampleCount::Fixed(300),
                ..Default::default()
            }),
            CommandConfig::Spectrum(SpectrumConfig::default()),
            CommandConfig::Joint(JointConfig::default()),
            CommandConfig::Design(DesignConfig {
                preset: Some(CascadeKind::FourPhoton),
                dk1: Some(0.32),
                ..Default::default()
            }),
            CommandConfig::Verify(VerifyConfig {
                perturbation: 1e-6,
                ..Default::default()
            }),
        ];
        for command in commands {
            let config = RunConfig {
                command,
                ..sample()
            };
            let text = config.to_toml_string().unwrap();
            let back = RunConfig::from_toml_str(&text).unwrap();
            assert_eq!(back, config, "{text}");
            assert_eq!(back.to_toml_string().unwrap(), text);
        }
    }

    #[test]
    fn parses_hand_written_file() {
        let text = r#"
[structure]
l = 10.25
n = 22
m = 8

[command]
kind = "joint"
x1 = [1.0, 2.0]
x2 = [4.2, 5.0]
samples1 = 11
samples2 = 1

[output]
out = "h.csv"
"#;
        let c = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(c.require_structure().unwrap().m(), 8);
        assert_eq!(c.format(), OutputFormat::Csv);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_structure_names_field() {
        let text = "[structure]\nl = -1.0\nn = 2\nm = 2\n[command]\nkind = \"verify\"\ndk_range = [0.0, 1.0]\nsamples = 10\npts_per_segment = 16\nrandom_samples = 0\nfourier_truncation = 11\n";
        let err = RunConfig::from_toml_str(text).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains('l'), "{err}");
    }

    #[test]
    fn validation_names_fields() {
        let mut c = sample();
        c.command = CommandConfig::Spectrum(SpectrumConfig {
            x_min: 3.0,
            x_max: 1.0,
            samples: SampleCount::AUTO,
        });
        assert!(c.validate().unwrap_err().to_string().contains("x_min"));
        c.command = CommandConfig::Design(DesignConfig::default());
        assert!(c.validate().unwrap_err().to_string().contains("dk1"));
        c.command = CommandConfig::Verify(VerifyConfig::default());
        c.output.format = Some(OutputFormat::Csv);
        assert!(c.validate().unwrap_err().to_string().contains("format"));
        c.structure = None;
        c.output.format = None;
        assert!(c.validate().unwrap_err().to_string().contains("structure"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range::<f64>("x1", "1:2.5").unwrap(), (1.0, 2.5));
        assert_eq!(parse_range::<u32>("n_range", "4:64").unwrap(), (4, 64));
        assert!(parse_range::<f64>("x1", "1-2").is_err());
        assert!(parse_range::<u32>("n_range", "a:3").is_err());
    }
}
