// SPDX-License-Identifier: Apache-2.0

//! NIS thermometer calibration: thermal voltage → electron temperature.
//!
//! Below the break temperature the curve is T = a + b·log₁₀(c − V); above it
//! a cubic polynomial in V. The cubic is fitted first, the break voltage is
//! where it crosses the break temperature, and the logarithmic branch is then
//! fitted through that point so the two branches meet exactly.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::config;
use crate::error::{Error, Result};

/// Boundary between the two fit ranges (K).
pub const DEFAULT_BREAK_TEMPERATURE: f64 = 0.135;

const MIN_POINTS: usize = 4;

/// Fraction of point pairs allowed to break the falling V(T) trend; isolated
/// swaps of neighbouring points come from voltage noise.
const MAX_DISCORDANT: f64 = 0.05;

/// One calibration sample: thermometer voltage at zero heating and the bath
/// temperature it was recorded at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationPoint {
    pub voltage: f64,
    pub temperature: f64,
}

/// T = a + b·log₁₀(c − V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBranch {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LogBranch {
    pub fn eval(&self, v: f64) -> f64 {
        self.a + self.b * (self.c - v).log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationCurve {
    pub low: LogBranch,
    /// Cubic coefficients p₀..p₃ of T = Σ p_k·V^k.
    pub high: [f64; 4],
    pub break_temperature: f64,
    pub break_voltage: f64,
    /// Calibrated voltage span.
    pub v_min: f64,
    pub v_max: f64,
    /// RMS temperature residual of the fit over all points (K).
    pub rms_residual: f64,
}

fn horner(p: &[f64; 4], v: f64) -> f64 {
    ((p[3] * v + p[2]) * v + p[1]) * v + p[0]
}

impl CalibrationCurve {
    /// Piecewise evaluation without range checks.
    pub fn eval(&self, v: f64) -> f64 {
        if v >= self.break_voltage {
            self.low.eval(v)
        } else {
            horner(&self.high, v)
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# NIS thermometer calibration curve\n");
        let fields = [
            ("break_temperature", self.break_temperature),
            ("break_voltage", self.break_voltage),
            ("low_a", self.low.a),
            ("low_b", self.low.b),
            ("low_c", self.low.c),
            ("high_p0", self.high[0]),
            ("high_p1", self.high[1]),
            ("high_p2", self.high[2]),
            ("high_p3", self.high[3]),
            ("v_min", self.v_min),
            ("v_max", self.v_max),
            ("rms_residual", self.rms_residual),
        ];
        for (k, v) in fields {
            let _ = writeln!(out, "{k} = {v:e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let entries = config::parse(text)?;
        let get = |key: &str| -> Result<f64> {
            entries
                .iter()
                .find(|e| e.key == key)
                .ok_or_else(|| Error::Config {
                    line: 0,
                    message: format!("missing `{key}`"),
                })?
                .parse_f64()
        };
        const KNOWN: [&str; 12] = [
            "break_temperature",
            "break_voltage",
            "low_a",
            "low_b",
            "low_c",
            "high_p0",
            "high_p1",
            "high_p2",
            "high_p3",
            "v_min",
            "v_max",
            "rms_residual",
        ];
        if let Some(e) = entries.iter().find(|e| !KNOWN.contains(&e.key.as_str())) {
            return Err(e.unknown());
        }
        Ok(CalibrationCurve {
            low: LogBranch {
                a: get("low_a")?,
                b: get("low_b")?,
                c: get("low_c")?,
            },
            high: [
                get("high_p0")?,
                get("high_p1")?,
                get("high_p2")?,
                get("high_p3")?,
            ],
            break_temperature: get("break_temperature")?,
            break_voltage: get("break_voltage")?,
            v_min: get("v_min")?,
            v_max: get("v_max")?,
            rms_residual: get("rms_residual")?,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Temperature for a measured thermometer voltage.
pub fn voltage_to_temperature(curve: &CalibrationCurve, v: f64) -> Result<f64> {
    if !(v >= curve.v_min && v <= curve.v_max) {
        return Err(Error::Extrapolation {
            voltage: v,
            min: curve.v_min,
            max: curve.v_max,
        });
    }
    Ok(curve.eval(v))
}

fn check_monotone(points: &[CalibrationPoint]) -> Result<Vec<CalibrationPoint>> {
    let mut sorted = points.to_vec();
    for p in &sorted {
        if !(p.voltage.is_finite() && p.temperature.is_finite() && p.temperature > 0.0) {
            return Err(Error::Domain(format!("invalid calibration point {p:?}")));
        }
    }
    sorted.sort_by(|a, b| a.temperature.total_cmp(&b.temperature));
    let describe = |a: &CalibrationPoint, b: &CalibrationPoint| {
        format!(
            "({:e} V, {} K) and ({:e} V, {} K)",
            a.voltage, a.temperature, b.voltage, b.temperature
        )
    };
    let mut discordant = 0usize;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (a, b) = (&sorted[i], &sorted[j]);
            if a.temperature == b.temperature || a.voltage == b.voltage {
                return Err(Error::NonMonotone(format!(
                    "{}: temperature and voltage must both differ",
                    describe(a, b)
                )));
            }
            if b.voltage > a.voltage {
                discordant += 1;
            }
        }
    }
    let pairs = sorted.len() * sorted.len().saturating_sub(1) / 2;
    if discordant as f64 > MAX_DISCORDANT * pairs as f64 {
        return Err(Error::NonMonotone(format!(
            "voltage rises with temperature in {discordant} of {pairs} point pairs"
        )));
    }
    Ok(sorted)
}

/// Least-squares cubic T(V), solved in a centred and scaled variable and
/// expanded back to raw coefficients.
fn fit_cubic(points: &[CalibrationPoint]) -> Result<[f64; 4]> {
    let n = points.len();
    let lo = points
        .iter()
        .map(|p| p.voltage)
        .fold(f64::INFINITY, f64::min);
    let hi = points
        .iter()
        .map(|p| p.voltage)
        .fold(f64::NEG_INFINITY, f64::max);
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let design = DMatrix::from_fn(n, 4, |i, k| {
        ((points[i].voltage - centre) / half).powi(k as i32)
    });
    let rhs = DVector::from_iterator(n, points.iter().map(|p| p.temperature));
    let q = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Domain(format!("cubic fit failed: {e}")))?;

    // Σ q_k ((V − m)/s)^k expanded in powers of V.
    const BINOM: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0],
        [1.0, 3.0, 3.0, 1.0],
    ];
    let mut p = [0.0; 4];
    for k in 0..4 {
        let scaled = q[k] / half.powi(k as i32);
        for j in 0..=k {
            p[j] += scaled * BINOM[k][j] * (-centre).powi((k - j) as i32);
        }
    }
    Ok(p)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || mid == lo || mid == hi {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Best anchored log branch for a fixed `c`: returns (b, sse).
fn anchored_log_fit(points: &[CalibrationPoint], vb: f64, tb: f64, c: f64) -> (f64, f64) {
    let anchor = (c - vb).log10();
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in points {
        let x = (c - p.voltage).log10() - anchor;
        let y = p.temperature - tb;
        sxy += x * y;
        sxx += x * x;
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let sse = points
        .iter()
        .map(|p| {
            let r = tb + b * ((c - p.voltage).log10() - anchor) - p.temperature;
            r * r
        })
        .sum();
    (b, sse)
}

fn fit_log_branch(points: &[CalibrationPoint], vb: f64, tb: f64) -> LogBranch {
    let v_top = points.iter().map(|p| p.voltage).fold(vb, f64::max);
    let span = points
        .iter()
        .map(|p| (p.voltage - vb).abs())
        .fold(0.0f64, f64::max)
        .max(f64::EPSILON * v_top.abs());
    // c = v_top + e^s; coarse scan in s, then golden-section refinement.
    let sse_at = |s: f64| anchored_log_fit(points, vb, tb, v_top + s.exp()).1;
    let (s_lo, s_hi) = ((span * 1e-6).ln(), (span * 1e4).ln());
    const GRID: usize = 400;
    let step = (s_hi - s_lo) / GRID as f64;
    let best = (0..=GRID)
        .map(|i| s_lo + step * i as f64)
        .min_by(|a, b| sse_at(*a).total_cmp(&sse_at(*b)))
        .unwrap_or(s_lo);
    let (mut a, mut b) = (best - step, best + step);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (sse_at(x1), sse_at(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = sse_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = sse_at(x2);
        }
    }
    let c = v_top + (0.5 * (a + b)).exp();
    let (slope, _) = anchored_log_fit(points, vb, tb, c);
    LogBranch {
        a: tb - slope * (c - vb).log10(),
        b: slope,
        c,
    }
}

/// Fits the two-branch curve with the default 135 mK break.
pub fn fit_calibration(points: &[CalibrationPoint]) -> Result<CalibrationCurve> {
    fit_calibration_with_break(points, DEFAULT_BREAK_TEMPERATURE)
}

pub fn fit_calibration_with_break(
    points: &[CalibrationPoint],
    break_temperature: f64,
) -> Result<CalibrationCurve> {
    let sorted = check_monotone(points)?;
    let (low, high): (Vec<_>, Vec<_>) = sorted
        .iter()
        .partition(|p| p.temperature < break_temperature);
    if low.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints {
            range: "low",
            needed: MIN_POINTS,
            found: low.len(),
        });
    }
    if high.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints {
            range: "high",
            needed: MIN_POINTS,
            found: high.len(),
        });
    }

    let cubic = fit_cubic(&high)?;
    let f = |v: f64| horner(&cubic, v) - break_temperature;
    // Lowest-voltage low-range point and highest-voltage high-range point
    // bracket the boundary; fall back to the full span.
    let inner = (high[0].voltage, low[low.len() - 1].voltage);
    let outer = (sorted[sorted.len() - 1].voltage, sorted[0].voltage);
    let break_voltage = bisect(inner.0, inner.1, f)
        .or_else(|| bisect(outer.0, outer.1, f))
        .ok_or_else(|| {
            Error::NonMonotone("cubic branch never reaches the break temperature".into())
        })?;

    let log = fit_log_branch(&low, break_voltage, break_temperature);
    let v_min = sorted[sorted.len() - 1].voltage;
    let v_max = sorted[0].voltage;
    if !(log.c > v_max) {
        return Err(Error::NonMonotone(
            "log branch undefined across the data".into(),
        ));
    }

    let mut curve = CalibrationCurve {
        low: log,
        high: cubic,
        break_temperature,
        break_voltage,
        v_min,
        v_max,
        rms_residual: 0.0,
    };
    let sse: f64 = sorted
        .iter()
        .map(|p| (curve.eval(p.voltage) - p.temperature).powi(2))
        .sum();
    curve.rms_residual = (sse / sorted.len() as f64).sqrt();

    const CHECK: usize = 2000;
    let mut prev = f64::INFINITY;
    for i in 0..=CHECK {
        let v = v_min + (v_max - v_min) * i as f64 / CHECK as f64;
        let t = curve.eval(v);
        if t > prev {
            return Err(Error::NonMonotone(format!(
                "fitted curve rises with voltage near {v:e} V"
            )));
        }
        prev = t;
    }
    Ok(curve)
}

/// Reads two-column (voltage in V, temperature in K) data. Columns may be
/// separated by whitespace, commas, semicolons or tabs; `#` starts a comment.
pub fn parse_calibration_points(text: &str) -> Result<Vec<CalibrationPoint>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let cols: Vec<&str> = body
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::Config {
                line,
                message: format!("expected two columns, found {}", cols.len()),
            });
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config {
                    line,
                    message: format!("not a number: `{s}`"),
                })
        };
        out.push(CalibrationPoint {
            voltage: num(cols[0])?,
            temperature: num(cols[1])?,
        });
    }
    Ok(out)
}

pub fn read_calibration_points(path: impl AsRef<Path>) -> Result<Vec<CalibrationPoint>> {
    parse_calibration_points(&std::fs::read_to_string(path)?)
}
