// SPDX-License-Identifier: Apache-2.0

//! Self-check suite run by the `validate` subcommand.

use std::fmt;

use crate::calibration::{self, CalibrationCurve, CalibrationPoint, LogBranch};
use crate::constants::PhysConstants;
use crate::dynamics::{evaluate_point, power_at, steady_state_closed_form, steady_state_generic};
use crate::params::DeviceParams;
use crate::spectrum::{build_hamiltonian, eigensystem_closed_form, eigensystem_numeric};
use crate::thermal::{ep_power, invert_ep_power};

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.status, Status::Fail(_)))
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, Status::Fail(_)))
            .map(|c| c.name)
            .collect()
    }

    pub fn status(&self, name: &str) -> Option<&Status> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.status)
    }

    /// 0 when every check passed or was skipped, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            4
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.status {
                Status::Pass => writeln!(f, "PASS     {}", c.name)?,
                Status::Fail(why) => writeln!(f, "FAIL     {}: {why}", c.name)?,
                Status::Skipped(why) => writeln!(f, "SKIPPED  {}: {why}", c.name)?,
            }
        }
        let failed = self.failed();
        if failed.is_empty() {
            writeln!(f, "all checks passed")
        } else {
            writeln!(f, "failed: {}", failed.join(", "))
        }
    }
}

const FLUXES: [f64; 7] = [0.0, 0.25, 0.43, 0.4641, 0.5, 0.536, 0.71];
const TEMPS: [(f64, f64); 3] = [(0.3, 0.08), (0.07, 0.08), (0.15, 0.25)];

fn outcome(result: Result<(), String>) -> Status {
    match result {
        Ok(()) => Status::Pass,
        Err(e) => Status::Fail(e),
    }
}

fn constants_check(c: &PhysConstants) -> Result<(), String> {
    let err = c.consistency_error();
    if err > 1e-15 {
        return Err(format!("Φ₀ = h/2e or ħ = h/2π violated by {err:e}"));
    }
    if *c != PhysConstants::SI {
        return Err("constants differ from the SI values used by the model".into());
    }
    Ok(())
}

fn eigen_check(p: &DeviceParams, c: &PhysConstants) -> Result<(), String> {
    for &flux in &FLUXES {
        let closed = eigensystem_closed_form(p, flux).map_err(|e| e.to_string())?;
        let h = build_hamiltonian(p, flux).map_err(|e| e.to_string())?;
        let numeric = eigensystem_numeric(&h, flux)
            .map_err(|e| e.to_string())?
            .aligned_to(&closed);
        let scale = closed.energies.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for k in 0..4 {
            let de = (closed.energies[k] - numeric.energies[k]).abs();
            if de > 1e-10 * scale {
                return Err(format!("energy {k} differs by {de:e} J at flux {flux}"));
            }
            if closed.overlap(k, &numeric, k).abs() < 1.0 - 1e-8 {
                return Err(format!("state {k} overlap below 1 − 1e-8 at flux {flux}"));
            }
        }
        let trace = closed.energies[2] + closed.energies[3];
        let want = c.h * (closed.fq + p.fr1 + p.gamma12);
        if ((trace - want) / want).abs() > 1e-12 {
            return Err(format!("E₂ + E₃ trace identity off at flux {flux}"));
        }
    }
    Ok(())
}

fn detailed_balance_check(p: &DeviceParams, c: &PhysConstants) -> Result<(), String> {
    for &flux in &FLUXES {
        for &(t1, t2) in &TEMPS {
            let pt = evaluate_point(p, flux, t1, t2).map_err(|e| e.to_string())?;
            for (gamma, t) in [(&pt.rates.gamma_r1, t1), (&pt.rates.gamma_r2, t2)] {
                for i in 0..4 {
                    for j in 0..4 {
                        let (down, up) = (gamma[i][j], gamma[j][i]);
                        if i == j || down == 0.0 || up == 0.0 {
                            continue;
                        }
                        let want = (c.hbar * pt.rates.omega[i][j] / (c.k_b * t)).exp();
                        let got = down / up;
                        if ((got - want) / want).abs() > 1e-8 {
                            return Err(format!(
                                "Γ{i}{j}/Γ{j}{i} = {got:e}, Boltzmann factor {want:e} (flux {flux}, T {t})"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn dark_state_check(p: &DeviceParams) -> Status {
    if p.g1 != p.g2 {
        return Status::Skipped("g1 != g2, no dark state".into());
    }
    if p.fr1 != p.fr2 {
        return Status::Skipped("fr1 != fr2, no dark state".into());
    }
    outcome((|| {
        for &flux in &FLUXES {
            let pt = evaluate_point(p, flux, 0.3, 0.08).map_err(|e| e.to_string())?;
            if pt.state.rho[1] != 0.0 {
                return Err(format!("ρ₁ = {:e} at flux {flux}", pt.state.rho[1]));
            }
            for j in 0..4 {
                let touching = [
                    pt.rates.gamma_r1[1][j],
                    pt.rates.gamma_r1[j][1],
                    pt.rates.gamma_r2[1][j],
                    pt.rates.gamma_r2[j][1],
                ];
                if touching.iter().any(|&g| g != 0.0) {
                    return Err(format!(
                        "nonzero rate touching the dark state at flux {flux}"
                    ));
                }
            }
        }
        Ok(())
    })())
}

fn steady_state_check(p: &DeviceParams) -> Result<(), String> {
    for &flux in &FLUXES {
        for &(t1, t2) in &TEMPS {
            let pt = evaluate_point(p, flux, t1, t2).map_err(|e| e.to_string())?;
            let rho = pt.state.rho;
            let sum: f64 = rho.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || rho.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
                return Err(format!(
                    "populations {rho:?} not a distribution at flux {flux}"
                ));
            }
            let generic = steady_state_generic(&pt.rates).map_err(|e| e.to_string())?;
            let reference = if pt.rates.is_isolated(1) {
                steady_state_closed_form(&pt.rates).map_err(|e| e.to_string())?
            } else {
                rho
            };
            for k in 0..4 {
                if (generic[k] - reference[k]).abs() > 1e-10 {
                    return Err(format!(
                        "closed form and linear solve disagree at flux {flux}"
                    ));
                }
            }
            let s = pt.state;
            if (s.power_to1 + s.power_to2).abs() > 1e-12 * s.power_to2.abs().max(1e-30) {
                return Err(format!("energy not conserved at flux {flux}"));
            }
        }
    }
    Ok(())
}

fn null_power_check(p: &DeviceParams) -> Result<(), String> {
    let scale = power_at(p, 0.5, 0.3, 0.08)
        .map_err(|e| e.to_string())?
        .abs();
    for &flux in &FLUXES {
        for t in [0.08, 0.2, 0.3] {
            let q = power_at(p, flux, t, t).map_err(|e| e.to_string())?;
            if q.abs() > 1e-3 * scale {
                return Err(format!(
                    "P = {q:e} W at equal temperatures {t} K, flux {flux}"
                ));
            }
        }
    }
    Ok(())
}

fn ep_round_trip_check(p: &DeviceParams) -> Result<(), String> {
    for t0 in [0.05, 0.08, 0.15, 0.3] {
        for power in [-1e-16, 0.0, 1e-16, 1e-15, 1e-14, 1e-13] {
            let te = invert_ep_power(p.sigma_v2, p.n_exp, power, t0).map_err(|e| e.to_string())?;
            let back = ep_power(p.sigma_v2, p.n_exp, te, t0);
            let scale = power.abs().max(p.sigma_v2 * t0.powi(p.n_exp as i32));
            if (back - power).abs() > 1e-12 * scale {
                return Err(format!("round trip {power:e} → {back:e} W at T0 = {t0}"));
            }
        }
    }
    Ok(())
}

/// A continuous curve with realistic NIS-thermometer magnitudes.
pub fn reference_curve() -> CalibrationCurve {
    anchored_curve([0.46, -1000.0, -2.0e5, -1.0e8], 0.23, 5.0e-4)
}

/// Cubic `high` joined at the default break temperature to a logarithmic
/// branch with slope `b` and pole `c`; `a` is fixed by continuity.
pub fn anchored_curve(high: [f64; 4], b: f64, c: f64) -> CalibrationCurve {
    let tb = calibration::DEFAULT_BREAK_TEMPERATURE;
    let horner = |v: f64| ((high[3] * v + high[2]) * v + high[1]) * v + high[0];
    let (mut lo, mut hi) = (0.0, c);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if horner(mid) > tb {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let vb = 0.5 * (lo + hi);
    CalibrationCurve {
        low: LogBranch {
            a: tb - b * (c - vb).log10(),
            b,
            c,
        },
        high,
        break_temperature: tb,
        break_voltage: vb,
        v_min: 0.0,
        v_max: 0.0,
        rms_residual: 0.0,
    }
}

/// Noiseless samples of `curve` at the given temperatures, inverting the
/// curve by bisection.
pub fn sample_curve(curve: &CalibrationCurve, temps: &[f64]) -> Vec<CalibrationPoint> {
    temps
        .iter()
        .map(|&t| {
            let (mut lo, mut hi) = (-1e-3, curve.low.c - 1e-12);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if curve.eval(mid) > t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            CalibrationPoint {
                voltage: 0.5 * (lo + hi),
                temperature: t,
            }
        })
        .collect()
}

fn calibration_check() -> Result<(), String> {
    let truth = reference_curve();
    let temps: Vec<f64> = (0..=29).map(|i| 0.08 + 0.01 * i as f64).collect();
    let pts = sample_curve(&truth, &temps);
    let fit = calibration::fit_calibration(&pts).map_err(|e| e.to_string())?;
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let coeffs = [
        (fit.low.a, truth.low.a),
        (fit.low.b, truth.low.b),
        (fit.low.c, truth.low.c),
        (fit.high[0], truth.high[0]),
        (fit.high[1], truth.high[1]),
        (fit.high[2], truth.high[2]),
        (fit.high[3], truth.high[3]),
    ];
    if let Some((got, want)) = coeffs.iter().find(|(g, w)| rel(*g, *w) > 0.01) {
        return Err(format!("coefficient {got:e} vs {want:e}"));
    }
    for p in &pts {
        let t = calibration::voltage_to_temperature(&fit, p.voltage).map_err(|e| e.to_string())?;
        if (t - p.temperature).abs() > 1e-4 {
            return Err(format!(
                "T({:e} V) = {t} K, expected {}",
                p.voltage, p.temperature
            ));
        }
    }
    Ok(())
}

/// Runs every check. `constants` is compared against the values the model
/// is built on and used wherever a check computes an expectation.
pub fn run_validation(params: &DeviceParams, constants: &PhysConstants) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, status: Status| checks.push(Check { name, status });

    push("physical constants", outcome(constants_check(constants)));
    if let Err(e) = params.validate() {
        push("device parameters", Status::Fail(e.to_string()));
        return ValidationReport { checks };
    }
    push("device parameters", Status::Pass);
    push(
        "eigen cross-check",
        if params.is_symmetric() {
            outcome(eigen_check(params, constants))
        } else {
            Status::Skipped("closed form needs fr1 == fr2 and g1 == g2".into())
        },
    );
    push(
        "detailed balance",
        outcome(detailed_balance_check(params, constants)),
    );
    push("dark state", dark_state_check(params));
    push("steady state", outcome(steady_state_check(params)));
    push("equilibrium null power", outcome(null_power_check(params)));
    push(
        "electron-phonon round trip",
        outcome(ep_round_trip_check(params)),
    );
    push("calibration round trip", outcome(calibration_check()));
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::K_B;

    #[test]
    fn pristine_config_passes() {
        let r = run_validation(&DeviceParams::default(), &PhysConstants::SI);
        assert!(r.passed(), "{r}");
        assert_eq!(r.exit_code(), 0);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass));
    }

    #[test]
    fn asymmetric_coupling_skips_dark_state() {
        let p = DeviceParams {
            g2: 0.25e9,
            ..DeviceParams::default()
        };
        let r = run_validation(&p, &PhysConstants::SI);
        assert!(matches!(r.status("dark state"), Some(Status::Skipped(_))));
        assert!(matches!(r.status("detailed balance"), Some(Status::Pass)));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_boltzmann_constant_fails() {
        let c = PhysConstants {
            k_b: K_B * 1.01,
            ..PhysConstants::SI
        };
        let r = run_validation(&DeviceParams::default(), &c);
        assert_eq!(r.exit_code(), 4);
        let failed = r.failed();
        assert!(failed.contains(&"physical constants"));
        assert!(failed.contains(&"detailed balance"));
        assert!(r.to_string().contains("FAIL     detailed balance"));
    }
}
