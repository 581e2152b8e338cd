// SPDX-License-Identifier: Apache-2.0

//! Seeded property checks shared by the acceptance runner and the property
//! tests. Each returns a short description of the first violation.

#![allow(dead_code)]

use heatvalve::calibration::{fit_calibration, CalibrationPoint};
use heatvalve::constants::{HBAR, K_B};
use heatvalve::spectrum::{build_hamiltonian, eigensystem_closed_form, eigensystem_numeric};
use heatvalve::validate::{reference_curve, sample_curve};
use heatvalve::{
    ep_power, evaluate_point, invert_ep_power, power_at, run_sweep, DeviceParams, SweepConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric device with couplings, resonator frequency and termination
/// drawn around the default values.
pub fn random_device(rng: &mut ChaCha8Rng) -> DeviceParams {
    let g = rng.random_range(0.05e9..0.4e9);
    let fr = rng.random_range(5e9..9e9);
    DeviceParams {
        r: rng.random_range(1.0..50.0),
        ip: rng.random_range(15e-9..45e-9),
        fq0: rng.random_range(1e9..4e9),
        fr1: fr,
        fr2: fr,
        g1: g,
        g2: g,
        ..DeviceParams::default()
    }
}

pub fn detailed_balance(tuples: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut compared = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..tuples {
        let p = random_device(&mut rng);
        let flux = rng.random_range(0.0..1.0);
        let t1 = rng.random_range(0.03..0.6);
        let t2 = rng.random_range(0.03..0.6);
        let pt = evaluate_point(&p, flux, t1, t2).map_err(|e| e.to_string())?;
        for (gamma, t) in [(&pt.rates.gamma_r1, t1), (&pt.rates.gamma_r2, t2)] {
            for i in 0..4 {
                for j in 0..4 {
                    let (down, up) = (gamma[i][j], gamma[j][i]);
                    if i == j || down == 0.0 || up == 0.0 {
                        continue;
                    }
                    let want = (HBAR * pt.rates.omega[i][j] / (K_B * t)).exp();
                    let rel = ((down / up - want) / want).abs();
                    worst = worst.max(rel);
                    compared += 1;
                    if rel > 1e-8 {
                        return Err(format!(
                            "Γ{i}{j}/Γ{j}{i} off by {rel:e} at flux {flux}, T {t}"
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{compared} rate pairs, worst {worst:.1e}"))
}

pub fn steady_state_and_dark(tuples: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..tuples {
        let p = random_device(&mut rng);
        let flux = rng.random_range(0.0..1.0);
        let (t1, t2) = (rng.random_range(0.03..0.6), rng.random_range(0.03..0.6));
        let pt = evaluate_point(&p, flux, t1, t2).map_err(|e| e.to_string())?;
        let rho = pt.state.rho;
        if rho[1] != 0.0 {
            return Err(format!("ρ₁ = {:e} at flux {flux}", rho[1]));
        }
        if rho.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
            return Err(format!("population outside [0, 1]: {rho:?}"));
        }
        let err = (rho.iter().sum::<f64>() - 1.0).abs();
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("Σρ − 1 = {err:e} at flux {flux}"));
        }
    }
    Ok(format!(
        "{tuples} points, ρ₁ = 0, worst |Σρ − 1| {worst:.1e}"
    ))
}

pub fn eigen_agreement(points: usize) -> Check {
    let p = DeviceParams::default();
    let mut worst_e = 0.0f64;
    let mut worst_v = 0.0f64;
    for i in 0..points {
        let flux = i as f64 / points as f64;
        let closed = eigensystem_closed_form(&p, flux).map_err(|e| e.to_string())?;
        let h = build_hamiltonian(&p, flux).map_err(|e| e.to_string())?;
        let numeric = eigensystem_numeric(&h, flux)
            .map_err(|e| e.to_string())?
            .aligned_to(&closed);
        let scale = closed.energies[3].abs();
        for k in 0..4 {
            worst_e = worst_e.max((closed.energies[k] - numeric.energies[k]).abs() / scale);
            let a = closed.coeffs[k];
            let b = numeric.coeffs[k];
            let same: f64 = (0..4).map(|m| (a[m] - b[m]).abs()).fold(0.0, f64::max);
            let flipped: f64 = (0..4).map(|m| (a[m] + b[m]).abs()).fold(0.0, f64::max);
            worst_v = worst_v.max(same.min(flipped));
        }
        if worst_e > 1e-10 || worst_v > 1e-10 {
            return Err(format!(
                "flux {flux}: energy {worst_e:e}, eigenvector {worst_v:e}"
            ));
        }
    }
    Ok(format!(
        "{points} flux points, energy {worst_e:.1e}, vector {worst_v:.1e}"
    ))
}

pub fn equilibrium_null_power(tuples: usize, seed: u64) -> Check {
    let p = DeviceParams::default();
    let scale = power_at(&p, 0.5, 0.3, 0.08).map_err(|e| e.to_string())?;
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..tuples {
        let flux = rng.random_range(0.0..1.0);
        let t = rng.random_range(0.03..0.6);
        let q = power_at(&p, flux, t, t).map_err(|e| e.to_string())?;
        worst = worst.max(q.abs() / scale);
        if q.abs() > 1e-3 * scale {
            return Err(format!("P = {q:e} W at T1 = T2 = {t}, flux {flux}"));
        }
    }
    Ok(format!("{tuples} points, worst |P|/peak {worst:.1e}"))
}

pub fn flux_mirror() -> Check {
    let p = DeviceParams::default();
    let cfg = SweepConfig::default();
    let fwd = run_sweep(&p, &cfg).map_err(|e| e.to_string())?;
    // Off-centre window against its reflection about one half.
    let left = SweepConfig {
        flux_start: 0.35,
        flux_stop: 0.45,
        points: 501,
        ..cfg
    };
    let right = SweepConfig {
        flux_start: 0.55,
        flux_stop: 0.65,
        ..left
    };
    let l = run_sweep(&p, &left).map_err(|e| e.to_string())?;
    let r = run_sweep(&p, &right).map_err(|e| e.to_string())?;
    let scale = fwd.records.iter().fold(0.0f64, |a, r| a.max(r.power.abs()));
    let mut worst = 0.0f64;
    for (a, b) in l.records.iter().zip(r.records.iter().rev()) {
        worst = worst.max((a.power - b.power).abs() / scale);
    }
    let n = fwd.records.len();
    for i in 0..n {
        let (a, b) = (&fwd.records[i], &fwd.records[n - 1 - i]);
        worst = worst.max((a.power - b.power).abs() / scale);
    }
    if worst > 1e-9 {
        return Err(format!("mirror mismatch {worst:e} of peak"));
    }
    Ok(format!("{n} points, worst {worst:.1e} of peak"))
}

/// P → Te → P over a (P, T0) grid. P runs over ±[0.01, 10⁴]·ΣV·T0ⁿ (above
/// the floor); smaller |P| is below what one f64 temperature can resolve.
pub fn ep_round_trip() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for sv in [9.35e-10, 11.44e-10, 3e-9] {
        for n in [4u32, 5, 6] {
            for i in 0..25 {
                let t0 = 0.02 + 0.02 * i as f64;
                let scale = sv * t0.powi(n as i32);
                for k in 0..=60 {
                    let q = 10f64.powf(-2.0 + 6.0 * k as f64 / 60.0);
                    for power in [q * scale, -q.min(0.99) * scale] {
                        let te = invert_ep_power(sv, n, power, t0).map_err(|e| e.to_string())?;
                        let back = ep_power(sv, n, te, t0);
                        let rel = ((back - power) / power).abs();
                        worst = worst.max(rel);
                        count += 1;
                        if rel > 1e-12 {
                            return Err(format!(
                                "P {power:e} → Te {te} → {back:e} (ΣV {sv:e}, n {n}, T0 {t0})"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} (P, T0) pairs, worst {worst:.1e}"))
}

pub fn calibration_temperatures() -> Vec<f64> {
    (0..30).map(|i| 0.08 + 0.01 * i as f64).collect()
}

pub fn calibration_noiseless() -> Check {
    let truth = reference_curve();
    let pts = sample_curve(&truth, &calibration_temperatures());
    let fit = fit_calibration(&pts).map_err(|e| e.to_string())?;
    let pairs = [
        ("a", fit.low.a, truth.low.a),
        ("b", fit.low.b, truth.low.b),
        ("c", fit.low.c, truth.low.c),
        ("p0", fit.high[0], truth.high[0]),
        ("p1", fit.high[1], truth.high[1]),
        ("p2", fit.high[2], truth.high[2]),
        ("p3", fit.high[3], truth.high[3]),
    ];
    let mut worst = 0.0f64;
    for (name, got, want) in pairs {
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        if rel > 0.01 {
            return Err(format!("{name} = {got:e}, generating value {want:e}"));
        }
    }
    Ok(format!("7 coefficients, worst {worst:.1e}"))
}

/// Fit to voltages with 1% multiplicative Gaussian noise; RMS error of the
/// fitted curve against the generating temperatures.
pub fn calibration_noisy(seed: u64) -> Result<f64, String> {
    let truth = reference_curve();
    let clean = sample_curve(&truth, &calibration_temperatures());
    let mut rng = rng(seed);
    let normal = Normal::new(0.0, 0.01).unwrap();
    let noisy: Vec<CalibrationPoint> = clean
        .iter()
        .map(|pt| CalibrationPoint {
            voltage: pt.voltage * (1.0 + normal.sample(&mut rng)),
            ..*pt
        })
        .collect();
    let fit = fit_calibration(&noisy).map_err(|e| e.to_string())?;
    let sq: f64 = clean
        .iter()
        .map(|pt| (fit.eval(pt.voltage) - pt.temperature).powi(2))
        .sum();
    Ok((sq / clean.len() as f64).sqrt())
}

pub fn calibration_noise_trials(trials: u64) -> Check {
    let mut worst = 0.0f64;
    for seed in 0..trials {
        let rms = calibration_noisy(seed)?;
        worst = worst.max(rms);
        if rms > 2e-3 {
            return Err(format!("seed {seed}: {:.3} mK RMS", rms * 1e3));
        }
    }
    Ok(format!(
        "{trials} noisy fits, worst {:.3} mK RMS",
        worst * 1e3
    ))
}
