//! The four subcommands.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{
    CommandConfig, DesignConfig, JointConfig, OutputFormat, RunConfig, SpectrumConfig, VerifyConfig,
};
use super::emit::{fmt_float, write_output};
use super::svg::{heatmap, line_plot, Inset};
use crate::analysis::{design_search, group_centre, twin_pair, DesignQuery, DesignResult};
use crate::cascade::{CascadeScenario, JointGrid};
use crate::error::{QpmError, Result};
use crate::lattice::StructureSpec;
use crate::oracle::{relative_deviation, verify_grid_with, OracleSweep};
use crate::spectral::{
    fourier_pheno, g_effective, y_phase_reversed, y_phase_reversed_sum, SpectrumGrid, FOURIER_PHASE,
};

/// Seed of the random mismatches drawn by the sum/product check.
pub const VERIFY_SEED: u64 = 20_130_701;

/// Tolerance of closed form against segment sum.
pub const TOL_CLOSED_VS_SUM: f64 = 1e-9;
/// Tolerance of segment sum against quadrature.
pub const TOL_SUM_VS_QUAD: f64 = 1e-8;
/// Tolerance on `| |Y_sum| − |Y| |`.
pub const TOL_SUM_VS_PRODUCT: f64 = 1e-12;
/// Relative tolerance of the truncated Fourier series at the twin peaks.
pub const TOL_FOURIER: f64 = 0.02;

const WORST_OFFENDERS: usize = 5;

fn structure(config: &RunConfig) -> Result<StructureSpec> {
    config.require_structure()
}

/// Group whose centre lies in the window, closest to its middle.
fn inset_for(spec: &StructureSpec, x_min: f64, x_max: f64) -> Option<Inset> {
    if spec.n() % 2 == 1 || spec.m() < 2 {
        return None;
    }
    let mid = (x_min + x_max) / 2.0;
    let first = ((x_min - PI / 2.0) / PI).ceil() as i64;
    let last = ((x_max - PI / 2.0) / PI).floor() as i64;
    let group = (first..=last).min_by(|a, b| {
        let (ca, cb) = (group_centre(*a), group_centre(*b));
        (ca.abs())
            .total_cmp(&cb.abs())
            .then((ca - mid).abs().total_cmp(&(cb - mid).abs()))
    })?;
    let c = group_centre(group);
    let half = 1.5 * PI / f64::from(spec.n());
    let label = match twin_pair(spec, group) {
        Ok((a, b)) => format!("twin peaks x = {:.4}, {:.4}", a.x, b.x),
        Err(_) => "twin-peak window".to_string(),
    };
    Some(Inset {
        x_range: ((c - half).max(x_min), (c + half).min(x_max)),
        label,
    })
}

fn spectrum_svg(grid: &SpectrumGrid, c: &SpectrumConfig) -> String {
    let spec = &grid.spec;
    let xs: Vec<f64> = grid.samples.iter().map(|s| s.x).collect();
    let ys: Vec<f64> = grid.samples.iter().map(|s| s.y).collect();
    let title = format!(
        "Y(x), l = {} um, N = {}, M = {}",
        spec.l(),
        spec.n(),
        spec.m()
    );
    line_plot(
        &title,
        "x = l dk / 2",
        "Y",
        &xs,
        &ys,
        inset_for(spec, c.x_min, c.x_max).as_ref(),
    )
}

/// Tabulate `Y` and `G` over an `x` window.
pub fn run_spectrum(config: &RunConfig) -> Result<SpectrumGrid> {
    let CommandConfig::Spectrum(c) = &config.command else {
        return Err(QpmError::config("command", "expected spectrum"));
    };
    config.validate()?;
    let spec = structure(config)?;
    let grid = SpectrumGrid::over_x(&spec, c.x_min, c.x_max, c.samples)?;
    let main = match config.format() {
        OutputFormat::Csv => grid.to_csv(),
        OutputFormat::Json => to_json(&grid)?,
        OutputFormat::Svg => spectrum_svg(&grid, c),
    };
    write_output(config.output.out.as_deref(), &main)?;
    if let Some(path) = &config.output.svg {
        write_output(Some(path), &spectrum_svg(&grid, c))?;
    }
    Ok(grid)
}

fn joint_svg(grid: &JointGrid) -> String {
    let spec = &grid.spec;
    let title = format!(
        "h(x1, x2), l = {} um, N = {}, M = {}",
        spec.l(),
        spec.n(),
        spec.m()
    );
    heatmap(&title, &grid.x1_axis, &grid.x2_axis, &grid.h)
}

/// Tabulate `h(x₁, x₂)` on a rectangular window.
pub fn run_joint(config: &RunConfig) -> Result<JointGrid> {
    let CommandConfig::Joint(c) = &config.command else {
        return Err(QpmError::config("command", "expected joint"));
    };
    config.validate()?;
    let spec = structure(config)?;
    let JointConfig {
        x1,
        x2,
        samples1,
        samples2,
    } = *c;
    let grid = JointGrid::compute(&spec, x1, x2, samples1, samples2)?;
    let main = match config.format() {
        OutputFormat::Csv => grid.to_csv(),
        OutputFormat::Json => to_json(&grid)?,
        OutputFormat::Svg => joint_svg(&grid),
    };
    write_output(config.output.out.as_deref(), &main)?;
    if let Some(path) = &config.output.svg {
        write_output(Some(path), &joint_svg(&grid))?;
    }
    Ok(grid)
}

/// Outcome of a design search, including the explicit empty case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub query: DesignQuery,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<CascadeScenario>,
    /// `"ok"` or `"no design found"`.
    pub status: String,
    pub results: Vec<DesignResult>,
}

impl DesignReport {
    pub const NO_DESIGN: &'static str = "no design found";
    pub const CSV_HEADER: &'static str =
        "rank,l,n,m,score,x1,x1_peak,residual1,x2,x2_peak,residual2";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (i, d) in self.results.iter().enumerate() {
            let (x1, x2) = d.targets(&self.query);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                i + 1,
                fmt_float(d.spec.l()),
                d.spec.n(),
                d.spec.m(),
                fmt_float(d.score),
                fmt_float(x1),
                fmt_float(d.matched_peaks.0.x),
                fmt_float(d.residuals.0),
                fmt_float(x2),
                fmt_float(d.matched_peaks.1.x),
                fmt_float(d.residuals.1)
            );
        }
        out
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = format!(
            "dk1 = {} um^-1, dk2 = {} um^-1: {}\n",
            self.query.dk1, self.query.dk2, self.status
        );
        if self.results.is_empty() {
            return out;
        }
        let _ = writeln!(
            out,
            "{:>4} {:>10} {:>4} {:>4} {:>10} {:>9} {:>9} {:>9} {:>9}",
            "rank", "l (um)", "N", "M", "score", "x1", "x1 peak", "x2", "x2 peak"
        );
        for (i, d) in self.results.iter().enumerate() {
            let (x1, x2) = d.targets(&self.query);
            let _ = writeln!(
                out,
                "{:>4} {:>10.5} {:>4} {:>4} {:>10.4e} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
                i + 1,
                d.spec.l(),
                d.spec.n(),
                d.spec.m(),
                d.score,
                x1,
                d.matched_peaks.0.x,
                x2,
                d.matched_peaks.1.x
            );
        }
        out
    }
}

/// Query described by a design configuration; explicit mismatches override
/// the preset's.
pub fn design_query(c: &DesignConfig) -> Result<(DesignQuery, Option<CascadeScenario>)> {
    let scenario = c.preset.map(CascadeScenario::preset);
    let dk1 = c.dk1.or(scenario.as_ref().map(|s| s.dk1));
    let dk2 = c.dk2.or(scenario.as_ref().map(|s| s.dk2));
    let (Some(dk1), Some(dk2)) = (dk1, dk2) else {
        return Err(QpmError::config(
            "dk1/dk2",
            "give both mismatches or a preset",
        ));
    };
    let mut query = DesignQuery::new(dk1, dk2, c.l_range, c.n_range, c.m_range);
    query.max_results = c.max_results;
    query.allow_odd_n = c.allow_odd_n;
    query.validate()?;
    Ok((query, scenario))
}

/// Search for double-phase-matching structures. Returns the report and the
/// table to show on the terminal.
pub fn run_design(config: &RunConfig) -> Result<(DesignReport, String)> {
    let CommandConfig::Design(c) = &config.command else {
        return Err(QpmError::config("command", "expected design"));
    };
    config.validate()?;
    let (query, scenario) = design_query(c)?;
    let results = design_search(&query)?;
    let status = if results.is_empty() {
        DesignReport::NO_DESIGN
    } else {
        "ok"
    };
    let report = DesignReport {
        query,
        scenario,
        status: status.to_string(),
        results,
    };
    let main = match config.format() {
        OutputFormat::Csv => report.to_csv(),
        _ => to_json(&report)?,
    };
    write_output(config.output.out.as_deref(), &main)?;
    let table = report.table();
    Ok((report, table))
}

/// One point where a check deviates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub dk: f64,
    pub deviation: f64,
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub samples: usize,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub worst: Vec<Offender>,
}

impl CheckResult {
    fn from_points(name: &str, tolerance: f64, mut points: Vec<Offender>) -> Self {
        points.sort_by(|a, b| {
            b.deviation
                .total_cmp(&a.deviation)
                .then(a.dk.total_cmp(&b.dk))
        });
        let max_deviation = points.first().map_or(0.0, |p| p.deviation);
        let samples = points.len();
        points.truncate(WORST_OFFENDERS);
        CheckResult {
            name: name.to_string(),
            tolerance,
            max_deviation,
            samples,
            passed: max_deviation.is_finite() && max_deviation < tolerance,
            skipped: None,
            worst: points,
        }
    }

    fn skipped(name: &str, tolerance: f64, reason: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            tolerance,
            max_deviation: 0.0,
            samples: 0,
            passed: true,
            skipped: Some(reason.to_string()),
            worst: Vec::new(),
        }
    }
}

/// Machine-readable verification summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub spec: StructureSpec,
    pub dk_range: (f64, f64),
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// One line per failed check with its worst offenders.
    pub fn failure_summary(&self) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| !c.passed) {
            let _ = write!(
                out,
                "{}: max deviation {:.3e} exceeds {:.1e} at dk =",
                c.name, c.max_deviation, c.tolerance
            );
            for o in &c.worst {
                let _ = write!(out, " {:.6} ({:.3e})", o.dk, o.deviation);
            }
            out.push('\n');
        }
        out
    }
}

fn oracle_checks(sweep: &OracleSweep) -> [CheckResult; 2] {
    let closed = sweep
        .reports
        .iter()
        .map(|r| Offender {
            dk: r.dk,
            deviation: r.rel_dev_closed_vs_sum,
        })
        .collect();
    let quad = sweep
        .reports
        .iter()
        .map(|r| Offender {
            dk: r.dk,
            deviation: r.rel_dev_sum_vs_quad,
        })
        .collect();
    [
        CheckResult::from_points("closed_form_vs_segment_sum", TOL_CLOSED_VS_SUM, closed),
        CheckResult::from_points("segment_sum_vs_quadrature", TOL_SUM_VS_QUAD, quad),
    ]
}

/// Grid mismatches plus `random_samples` uniform draws from the window.
fn sum_product_check(spec: &StructureSpec, c: &VerifyConfig, grid: &[f64]) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let (lo, hi) = c.dk_range;
    let random = (0..c.random_samples).map(|_| rng.gen_range(lo..=hi));
    let points = grid
        .iter()
        .copied()
        .chain(random)
        .map(|dk| {
            let product = y_phase_reversed(dk, spec) * (1.0 + c.perturbation);
            Offender {
                dk,
                deviation: (y_phase_reversed_sum(dk, spec).norm() - product.abs()).abs(),
            }
        })
        .collect();
    CheckResult::from_points("sum_vs_product", TOL_SUM_VS_PRODUCT, points)
}

fn fourier_check(spec: &StructureSpec, c: &VerifyConfig) -> Result<CheckResult> {
    const NAME: &str = "fourier_convergence_at_twins";
    if spec.n() % 2 == 1 || spec.m() < 2 {
        return Ok(CheckResult::skipped(
            NAME,
            TOL_FOURIER,
            "no twin peaks for odd N or M = 1",
        ));
    }
    let (a, b) = twin_pair(spec, 0)?;
    let scale = spec.total_length() * spec.chi0();
    let mut points = Vec::new();
    for peak in [a, b] {
        let closed = g_effective(peak.dk, spec) * (1.0 + c.perturbation);
        let series = fourier_pheno(peak.dk, spec, c.fourier_truncation, c.fourier_truncation)?;
        let deviation = relative_deviation(series, FOURIER_PHASE * closed, scale);
        points.push(Offender {
            dk: peak.dk,
            deviation,
        });
    }
    Ok(CheckResult::from_points(NAME, TOL_FOURIER, points))
}

/// Cross-validate every evaluator. The report is written before a tolerance
/// breach is returned as [`QpmError::VerificationFailed`].
pub fn run_verify(config: &RunConfig) -> Result<VerifyReport> {
    let CommandConfig::Verify(c) = &config.command else {
        return Err(QpmError::config("command", "expected verify"));
    };
    config.validate()?;
    let spec = structure(config)?;
    let (lo, hi) = c.dk_range;
    let sweep = verify_grid_with(&spec, lo, hi, c.samples, c.pts_per_segment, c.perturbation)?;
    let grid: Vec<f64> = sweep.reports.iter().map(|r| r.dk).collect();
    let [closed, quad] = oracle_checks(&sweep);
    let checks = vec![
        closed,
        quad,
        sum_product_check(&spec, c, &grid),
        fourier_check(&spec, c)?,
    ];
    let report = VerifyReport {
        spec,
        dk_range: c.dk_range,
        seed: VERIFY_SEED,
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    write_output(config.output.out.as_deref(), &to_json(&report)?)?;
    if report.passed {
        Ok(report)
    } else {
        Err(QpmError::VerificationFailed(report.failure_summary()))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| QpmError::config("output", format!("cannot serialize: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{OutputConfig, SpectrumConfig};
    use crate::spectral::SampleCount;

    fn config(spec: StructureSpec, command: CommandConfig) -> RunConfig {
        RunConfig {
            structure: Some(spec),
            command,
            output: OutputConfig::default(),
        }
    }

    #[test]
    fn inset_targets_first_group() {
        let spec = StructureSpec::new(10.25, 22, 8).unwrap();
        let inset = inset_for(&spec, 0.0, 7.0).unwrap();
        assert!(inset.x_range.0 < 1.4994 && inset.x_range.1 > 1.6422);
        assert!(inset.label.starts_with("twin peaks"));
        assert!(inset_for(&StructureSpec::new(1.0, 1, 1).unwrap(), 0.0, 7.0).is_none());
        assert!(inset_for(&spec, 0.0, 1.0).is_none());
    }

    #[test]
    fn verify_small_spec_passes_and_perturbation_fails() {
        let spec = StructureSpec::new(10.25, 22, 9).unwrap();
        let mut v = VerifyConfig {
            samples: 64,
            random_samples: 50,
            ..Default::default()
        };
        let out = tempfile_path("verify.json");
        let mut c = config(spec, CommandConfig::Verify(v.clone()));
        c.output.out = Some(out.clone());
        let report = run_verify(&c).unwrap();
        assert!(report.passed);
        assert_eq!(report.checks.len(), 4);
        v.perturbation = 1e-6;
        c.command = CommandConfig::Verify(v);
        let err = run_verify(&c).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("closed_form_vs_segment_sum"));
        let written: VerifyReport =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(!written.passed);
        let _ = std::fs::remove_file(out);
    }

    fn tempfile_path(name: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("qpm-unit-{}-{name}", std::process::id()))
    }

    #[test]
    fn spectrum_rejects_wrong_command() {
        let spec = StructureSpec::new(1.0, 2, 2).unwrap();
        let c = config(spec, CommandConfig::Verify(VerifyConfig::default()));
        assert!(run_spectrum(&c).is_err());
        let c = config(
            spec,
            CommandConfig::Spectrum(SpectrumConfig {
                x_min: 0.0,
                x_max: 1.0,
                samples: SampleCount::Fixed(1),
            }),
        );
        assert_eq!(run_spectrum(&c).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn design_report_empty_record() {
        let c = DesignConfig {
            dk1: Some(0.32),
            dk2: Some(0.87),
            l_range: (100.0, 100.5),
            n_range: (4, 6),
            m_range: (2, 3),
            ..Default::default()
        };
        let out = tempfile_path("design.json");
        let rc = RunConfig {
            structure: None,
            command: CommandConfig::Design(c),
            output: OutputConfig {
                out: Some(out.clone()),
                ..Default::default()
            },
        };
        let (report, table) = run_design(&rc).unwrap();
        assert_eq!(report.status, DesignReport::NO_DESIGN);
        assert!(table.contains(DesignReport::NO_DESIGN));
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.contains(DesignReport::NO_DESIGN));
        let _ = std::fs::remove_file(out);
    }
}
