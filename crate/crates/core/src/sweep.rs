// SPDX-License-Identifier: Apache-2.0

//! Flux sweeps, peak annotation and switching curves.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dynamics::{evaluate_point, power_at};
use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::spectrum::sweet_spot_offset;
use crate::thermal::{ep_power, invert_ep_power, switching_ratio};

/// How the temperature of reservoir 2 is obtained at each flux point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum T2Mode {
    /// Held at `SweepConfig::t2`.
    #[default]
    Fixed,
    /// Solved from the reservoir-2 energy balance P₁→₂ = ΣV₂(T₂ⁿ − T₀ⁿ).
    SelfConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub flux_start: f64,
    pub flux_stop: f64,
    /// Number of grid points; a zero-width range always yields one point.
    pub points: usize,
    /// Reservoir 1 temperature (K).
    pub t1: f64,
    /// Phonon bath temperature (K).
    pub t0: f64,
    /// Reservoir 2 temperature in [`T2Mode::Fixed`] (K).
    pub t2: f64,
    pub mode: T2Mode,
    /// Flux-independent heat flow added to every point (W).
    pub background_power: f64,
    /// Evaluate flux points on the rayon pool.
    pub parallel: bool,
    /// Self-consistency stops once the undamped T₂ update is below this (K).
    pub tolerance: f64,
    pub max_iterations: usize,
    pub damping: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            flux_start: 0.3,
            flux_stop: 0.7,
            points: 2001,
            t1: 0.3,
            t0: 0.08,
            t2: 0.08,
            mode: T2Mode::Fixed,
            background_power: 0.0,
            parallel: true,
            tolerance: 1e-9,
            max_iterations: 100,
            damping: 0.5,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if !(self.flux_start.is_finite() && self.flux_stop.is_finite()) {
            return bad("flux range must be finite".into());
        }
        if self.flux_start > self.flux_stop {
            return bad(format!(
                "flux start {} exceeds stop {}",
                self.flux_start, self.flux_stop
            ));
        }
        if self.flux_start < self.flux_stop && self.points < 2 {
            return bad(format!("need at least 2 points, got {}", self.points));
        }
        for (name, t) in [("T1", self.t1), ("T0", self.t0), ("T2", self.t2)] {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("{name} must be > 0, got {t}"));
            }
        }
        if !self.background_power.is_finite() {
            return bad("background power must be finite".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        if !(self.tolerance > 0.0) || self.max_iterations == 0 {
            return bad("self-consistency tolerance and iteration cap must be positive".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.flux_start == self.flux_stop {
            return vec![self.flux_start];
        }
        let n = self.points;
        let span = self.flux_stop - self.flux_start;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.flux_stop
                } else {
                    self.flux_start + span * (i as f64 / (n - 1) as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub flux_frac: f64,
    /// Qubit frequency (Hz).
    pub fq: f64,
    pub rho: [f64; 4],
    /// Power into reservoir 2 including any background (W).
    pub power: f64,
    /// Reservoir 2 temperature (K).
    pub t2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakKind {
    /// Maximum nearest the sweet spot where the bare qubit sits below all
    /// resonator passbands.
    Central,
    /// Qubit crossing the fundamental resonator mode.
    InnerSatellite,
    /// Crossing of the n-th passband (n ≥ 2).
    OuterSatellite(u32),
    /// Any other local maximum.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub kind: PeakKind,
    /// Index of the grid maximum.
    pub index: usize,
    /// Location after quadratic refinement.
    pub flux_frac: f64,
    pub height: f64,
    pub prominence: f64,
    /// Qubit frequency at the grid maximum (Hz).
    pub fq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    pub peaks: Vec<Peak>,
}

/// Default prominence threshold relative to the central peak height.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

fn evaluate_record(params: &DeviceParams, cfg: &SweepConfig, flux: f64) -> Result<SweepRecord> {
    let record = |t2: f64| -> Result<SweepRecord> {
        let pt = evaluate_point(params, flux, cfg.t1, t2)?;
        Ok(SweepRecord {
            flux_frac: flux,
            fq: pt.fq,
            rho: pt.state.rho,
            power: pt.state.power_to2 + cfg.background_power,
            t2,
        })
    };
    match cfg.mode {
        T2Mode::Fixed => record(cfg.t2),
        T2Mode::SelfConsistent => {
            let mut t2 = cfg.t0;
            let mut last = f64::INFINITY;
            for _ in 0..cfg.max_iterations {
                let p = power_at(params, flux, cfg.t1, t2)? + cfg.background_power;
                let target = invert_ep_power(params.sigma_v2, params.n_exp, p, cfg.t0)?;
                last = target - t2;
                if last.abs() < cfg.tolerance {
                    return record(target);
                }
                t2 += cfg.damping * last;
            }
            Err(Error::Convergence {
                flux,
                iterations: cfg.max_iterations,
                residual: last.abs(),
            })
        }
    }
}

/// Runs the full pipeline at every grid point and annotates the peaks with
/// the default prominence threshold. Output order follows the grid
/// regardless of `cfg.parallel`.
pub fn run_sweep(params: &DeviceParams, cfg: &SweepConfig) -> Result<SweepResult> {
    params.validate()?;
    cfg.validate()?;
    let grid = cfg.grid();
    let records: Vec<SweepRecord> = if cfg.parallel {
        grid.par_iter()
            .map(|&f| evaluate_record(params, cfg, f))
            .collect::<Result<_>>()?
    } else {
        grid.iter()
            .map(|&f| evaluate_record(params, cfg, f))
            .collect::<Result<_>>()?
    };
    let fr = 0.5 * (params.fr1 + params.fr2);
    let peaks = find_peaks(&records, fr, DEFAULT_PROMINENCE);
    Ok(SweepResult { records, peaks })
}

/// Height minus the higher of the two lowest points reached on each side
/// before meeting a strictly higher sample.
fn prominence(values: &[f64], i: usize) -> f64 {
    let h = values[i];
    let mut left = h;
    for &v in values[..i].iter().rev() {
        if v > h {
            break;
        }
        left = left.min(v);
    }
    let mut right = h;
    for &v in &values[i + 1..] {
        if v > h {
            break;
        }
        right = right.min(v);
    }
    h - left.max(right)
}

/// Locates local maxima of the power curve, refines each with a parabola
/// through its three grid samples, and classifies them by which resonator
/// passband the qubit frequency is closest to. Peaks whose prominence falls
/// below `threshold` times the central height (or the tallest peak when no
/// central peak exists) are dropped.
pub fn find_peaks(records: &[SweepRecord], fr: f64, threshold: f64) -> Vec<Peak> {
    let n = records.len();
    if n < 5 {
        return Vec::new();
    }
    let p: Vec<f64> = records.iter().map(|r| r.power).collect();
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(p[i] > p[i - 1] && p[i] >= p[i + 1]) {
            continue;
        }
        let (x0, x1, x2) = (
            records[i - 1].flux_frac,
            records[i].flux_frac,
            records[i + 1].flux_frac,
        );
        let denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
        let (flux_frac, height) = if denom < 0.0 {
            let offset = 0.5 * (p[i - 1] - p[i + 1]) / denom;
            (
                x1 + offset * 0.5 * (x2 - x0),
                p[i] - 0.25 * (p[i - 1] - p[i + 1]) * offset,
            )
        } else {
            (x1, p[i])
        };
        let order = (records[i].fq / fr).round() as u32;
        let kind = match order {
            0 => PeakKind::Other,
            1 => PeakKind::InnerSatellite,
            k => PeakKind::OuterSatellite(k),
        };
        peaks.push(Peak {
            kind,
            index: i,
            flux_frac,
            height,
            prominence: prominence(&p, i),
            fq: records[i].fq,
        });
    }

    let central = peaks
        .iter()
        .enumerate()
        .filter(|(_, pk)| pk.kind == PeakKind::Other)
        .min_by(|(_, a), (_, b)| {
            sweet_spot_offset(a.flux_frac).total_cmp(&sweet_spot_offset(b.flux_frac))
        })
        .map(|(i, _)| i);
    if let Some(c) = central {
        peaks[c].kind = PeakKind::Central;
    }
    let reference = match central {
        Some(c) => peaks[c].height.abs(),
        None => peaks.iter().fold(0.0f64, |a, pk| a.max(pk.height.abs())),
    };
    let cut = threshold * reference;
    peaks.retain(|pk| pk.kind == PeakKind::Central || pk.prominence >= cut);
    peaks
}

impl SweepResult {
    pub fn central(&self) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.kind == PeakKind::Central)
    }

    pub fn count(&self, kind: PeakKind) -> usize {
        self.peaks.iter().filter(|p| p.kind == kind).count()
    }

    pub const CSV_HEADER: &'static str = "flux_frac,f_q_hz,rho0,rho1,rho2,rho3,power_w,t2_k";

    /// CSV body with header; every float in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.records.len() * 160);
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.flux_frac, r.fq, r.rho[0], r.rho[1], r.rho[2], r.rho[3], r.power, r.t2
            );
        }
        out
    }

    /// Peak annotations as `peak.<i>.<field> = value` lines.
    pub fn peak_summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "peak_count = {}", self.peaks.len());
        for (i, pk) in self.peaks.iter().enumerate() {
            let kind = match pk.kind {
                PeakKind::Central => "central".to_string(),
                PeakKind::InnerSatellite => "inner_satellite".to_string(),
                PeakKind::OuterSatellite(k) => format!("outer_satellite_{k}"),
                PeakKind::Other => "other".to_string(),
            };
            let _ = writeln!(out, "peak.{i}.kind = {kind}");
            let _ = writeln!(out, "peak.{i}.flux_frac = {}", pk.flux_frac);
            let _ = writeln!(
                out,
                "peak.{i}.grid_flux_frac = {}",
                self.records[pk.index].flux_frac
            );
            let _ = writeln!(out, "peak.{i}.f_q_hz = {:e}", pk.fq);
            let _ = writeln!(out, "peak.{i}.height_w = {:e}", pk.height);
            let _ = writeln!(out, "peak.{i}.prominence_w = {:e}", pk.prominence);
        }
        out
    }
}

/// On/off switching ratio for each reservoir-1 temperature, with reservoir 2
/// held at the bath temperature. `background_power` is added to both states.
pub fn switching_curve(
    params: &DeviceParams,
    t1_list: &[f64],
    t0: f64,
    background_power: f64,
) -> Result<Vec<(f64, f64)>> {
    if t1_list.is_empty() {
        return Err(Error::Domain(
            "switching curve needs at least one T1".into(),
        ));
    }
    t1_list
        .iter()
        .map(|&t1| {
            let on = power_at(params, 0.5, t1, t0)? + background_power;
            let off = power_at(params, 0.0, t1, t0)? + background_power;
            Ok((t1, switching_ratio(on, off)?))
        })
        .collect()
}

/// Residual of the reservoir-2 energy balance for a self-consistent record.
pub fn balance_residual(params: &DeviceParams, t0: f64, record: &SweepRecord) -> f64 {
    ep_power(params.sigma_v2, params.n_exp, record.t2, t0) - record.power
}
