// SPDX-License-Identifier: Apache-2.0

//! Subcommand implementations behind the `heatvalve` binary.
//!
//! Each command returns the text it would write, so library users and the
//! binary share one code path.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::calibration::{self, CalibrationCurve, DEFAULT_BREAK_TEMPERATURE};
use crate::config;
use crate::constants::{PhysConstants, H};
use crate::dynamics::{bare_resistor_power, power_at};
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::params::DeviceParams;
use crate::spectrum::eigensystem;
use crate::sweep::{run_sweep, SweepConfig, SweepResult};
use crate::thermal::switching_ratio;
use crate::validate::{run_validation, ValidationReport};

/// Device parameters plus the run-level keys a config file may carry.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: DeviceParams,
    /// Flux-independent heat flow added to sweeps and switching ratios (W).
    pub background_power: f64,
    pub calibration_break: f64,
    pub path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: DeviceParams::default(),
            background_power: 0.0,
            calibration_break: DEFAULT_BREAK_TEMPERATURE,
            path: None,
        }
    }
}

impl RunConfig {
    pub fn from_config_str(text: &str) -> Result<Self> {
        let entries = config::parse(text)?;
        let mut cfg = RunConfig {
            params: DeviceParams::base_from(&entries)?,
            ..RunConfig::default()
        };
        for entry in &entries {
            match entry.key.as_str() {
                "preset" => {}
                "backgroundPower" => cfg.background_power = entry.parse_f64()?,
                "calibrationBreak" => cfg.calibration_break = entry.parse_f64()?,
                _ => {
                    if !cfg.params.apply(entry)? {
                        return Err(entry.unknown());
                    }
                }
            }
        }
        cfg.params.validate()?;
        if !(cfg.calibration_break > 0.0) {
            return Err(Error::param("calibrationBreak", "must be positive"));
        }
        Ok(cfg)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_config_str(&std::fs::read_to_string(path)?)?;
        cfg.path = Some(path.display().to_string());
        Ok(cfg)
    }

    /// Defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::from_config_file(p),
            None => Ok(Self::default()),
        }
    }

    fn manifest(&self, subcommand: &str, outputs: &[&Path]) -> RunManifest {
        outputs.iter().fold(
            RunManifest::new(subcommand, self.path.clone(), self.params),
            |m, o| m.with_output(o.display().to_string()),
        )
    }
}

/// Writes `text` to `path`, or returns it untouched for the caller to print.
fn emit(path: Option<&Path>, text: String) -> Result<String> {
    if let Some(p) = path {
        std::fs::write(p, &text)?;
    }
    Ok(text)
}

pub const SPECTRUM_HEADER: &str = "flux_frac,f_q_hz,e0_hz,e1_hz,e2_hz,e3_hz";

/// Qubit frequency and the four eigenenergies (as frequencies) on a uniform
/// flux grid.
pub fn cmd_spectrum(
    cfg: &RunConfig,
    flux_start: f64,
    flux_stop: f64,
    points: usize,
    out: Option<&Path>,
) -> Result<String> {
    let grid = SweepConfig {
        flux_start,
        flux_stop,
        points,
        ..SweepConfig::default()
    };
    grid.validate()?;
    let outputs: Vec<&Path> = out.into_iter().collect();
    let mut text = cfg.manifest("spectrum", &outputs).header();
    text.push_str(SPECTRUM_HEADER);
    text.push('\n');
    for flux in grid.grid() {
        let eig = eigensystem(&cfg.params, flux)?;
        let e = eig.energies.map(|x| x / H);
        let _ = writeln!(
            text,
            "{},{:e},{:e},{:e},{:e},{:e}",
            flux, eig.fq, e[0], e[1], e[2], e[3]
        );
    }
    emit(out, text)
}

/// Path of the peak summary written next to a sweep CSV.
pub fn peaks_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_stem().unwrap_or_default().to_os_string();
    name.push(".peaks.txt");
    csv.with_file_name(name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub result: SweepResult,
    pub csv: String,
    pub summary: String,
}

/// Runs the sweep and, when `out` is given, writes the CSV there and the
/// peak summary to [`peaks_path`].
pub fn cmd_sweep(cfg: &RunConfig, sweep: &SweepConfig, out: Option<&Path>) -> Result<SweepOutput> {
    let result = run_sweep(&cfg.params, sweep)?;
    let summary_path = out.map(peaks_path);
    let outputs: Vec<&Path> = out.into_iter().chain(summary_path.as_deref()).collect();
    let header = cfg.manifest("sweep", &outputs).header();
    let mut mode = format!(
        "# sweep: flux {}..{} points {} t1 {} t0 {} t2 {} mode {:?} background {:e}\n",
        sweep.flux_start,
        sweep.flux_stop,
        sweep.points,
        sweep.t1,
        sweep.t0,
        sweep.t2,
        sweep.mode,
        sweep.background_power
    );
    mode.insert_str(0, &header);
    let csv = emit(out, format!("{mode}{}", result.to_csv()))?;
    let summary = emit(
        summary_path.as_deref(),
        format!("{mode}{}", result.peak_summary()),
    )?;
    Ok(SweepOutput {
        result,
        csv,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub t1: f64,
    pub t0: f64,
    /// Full-model power into reservoir 2 at Φ₀/2 with T₂ = T₀ (W).
    pub full_power: f64,
    /// Bare-resistor estimate at Φ₀/2 (W).
    pub closed_form_power: f64,
    /// `full_power / closed_form_power`; NaN when the estimate vanishes.
    pub ratio: f64,
    /// On (Φ₀/2) versus off (Φ = 0) ratio including background; `None` when
    /// undefined.
    pub switching_ratio: Option<f64>,
}

impl fmt::Display for PeakReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t1_k = {}", self.t1)?;
        writeln!(f, "t0_k = {}", self.t0)?;
        writeln!(f, "full_model_power_w = {:e}", self.full_power)?;
        writeln!(f, "closed_form_power_w = {:e}", self.closed_form_power)?;
        writeln!(f, "ratio = {}", self.ratio)?;
        match self.switching_ratio {
            Some(r) => writeln!(f, "switching_ratio = {r}"),
            None => writeln!(f, "switching_ratio = undefined"),
        }
    }
}

pub fn cmd_peak(cfg: &RunConfig, t1: f64, t0: f64) -> Result<PeakReport> {
    let full_power = power_at(&cfg.params, 0.5, t1, t0)?;
    let closed_form_power = bare_resistor_power(&cfg.params, t1, 0.5)?;
    let off = power_at(&cfg.params, 0.0, t1, t0)?;
    let ratio = if closed_form_power != 0.0 {
        full_power / closed_form_power
    } else {
        f64::NAN
    };
    let switching = switching_ratio(
        full_power + cfg.background_power,
        off + cfg.background_power,
    )
    .ok();
    Ok(PeakReport {
        t1,
        t0,
        full_power,
        closed_form_power,
        ratio,
        switching_ratio: switching,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrateOutput {
    pub curve: CalibrationCurve,
    pub curve_text: String,
    /// `voltage,temperature_k` rows, present when voltages were supplied.
    pub converted: Option<String>,
}

/// Fits the curve to a two-column (voltage, temperature) file. The curve is
/// written to `out`; with `voltages`, every voltage in that file is converted
/// and the table written to `converted_out`.
pub fn cmd_calibrate(
    cfg: &RunConfig,
    points: &Path,
    voltages: Option<&Path>,
    out: Option<&Path>,
    converted_out: Option<&Path>,
) -> Result<CalibrateOutput> {
    let pts = calibration::read_calibration_points(points)?;
    let curve = calibration::fit_calibration_with_break(&pts, cfg.calibration_break)?;
    let outputs: Vec<&Path> = out.into_iter().chain(converted_out).collect();
    let manifest = cfg.manifest("calibrate", &outputs).header();
    let curve_text = emit(
        out,
        format!(
            "{manifest}# points: {}\n{}",
            points.display(),
            curve.to_text()
        ),
    )?;
    let converted = match voltages {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut table = format!("{manifest}voltage,temperature_k\n");
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let v: f64 = line.parse().map_err(|_| Error::Config {
                    line: n + 1,
                    message: format!("not a voltage: `{line}`"),
                })?;
                let t = calibration::voltage_to_temperature(&curve, v)?;
                let _ = writeln!(table, "{v:e},{t}");
            }
            Some(emit(converted_out, table)?)
        }
    };
    Ok(CalibrateOutput {
        curve,
        curve_text,
        converted,
    })
}

pub fn cmd_validate(cfg: &RunConfig) -> ValidationReport {
    run_validation(&cfg.params, &PhysConstants::SI)
}

/// Same as [`cmd_validate`] with substituted constants, for exercising the
/// failure path.
pub fn cmd_validate_with(cfg: &RunConfig, constants: &PhysConstants) -> ValidationReport {
    run_validation(&cfg.params, constants)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_accepts_extra_keys() {
        let cfg =
            RunConfig::from_config_str("preset = spectroscopy\nbackgroundPower = 1e-15\n").unwrap();
        assert_eq!(cfg.params.ip, 21e-9);
        assert_eq!(cfg.background_power, 1e-15);
        assert!(matches!(
            RunConfig::from_config_str("Rr = 3\n"),
            Err(Error::Config { line: 1, .. })
        ));
    }

    #[test]
    fn spectrum_columns() {
        let text = cmd_spectrum(&RunConfig::default(), 0.4, 0.6, 201, None).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("flux"))
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 201);
        let min = rows.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
        assert!((min[0] - 0.5).abs() < 1e-12);
        assert!((min[1] - 2e9).abs() < 1e-3);
        for r in &rows {
            assert!((r[3] - 7e9).abs() < 1e-3);
        }
    }

    #[test]
    fn peak_report_at_equal_temperatures() {
        let r = cmd_peak(&RunConfig::default(), 0.08, 0.08).unwrap();
        assert!(r.full_power.abs() < 1e-20);
        assert!(r.closed_form_power.abs() < 1e-14);
        assert!(r.to_string().contains("switching_ratio"));
    }

    #[test]
    fn peaks_path_sits_next_to_csv() {
        assert_eq!(
            peaks_path(Path::new("out/run.csv")),
            Path::new("out/run.peaks.txt")
        );
    }
}
