// SPDX-License-Identifier: Apache-2.0

//! Reservoir energy balance and switching-ratio arithmetic.

use crate::error::{Error, Result};

/// Electron–phonon heat flow ΣV·(T_eⁿ − T_0ⁿ), positive when the electrons
/// are hotter than the phonons.
pub fn ep_power(sigma_v: f64, n: u32, te: f64, t0: f64) -> f64 {
    // (Te − T0)·Σ Te^k·T0^(n−1−k) keeps small differences exact.
    let (mut sum, mut t0k) = (0.0, 1.0);
    for _ in 0..n {
        sum = sum * te + t0k;
        t0k *= t0;
    }
    sigma_v * (te - t0) * sum
}

/// Electron temperature at which the electron–phonon flow balances an input
/// power `p`.
pub fn invert_ep_power(sigma_v: f64, n: u32, p: f64, t0: f64) -> Result<f64> {
    if !(sigma_v > 0.0) || n == 0 || !(t0 > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "invalid electron-phonon inversion input (ΣV = {sigma_v}, n = {n}, T0 = {t0}, P = {p})"
        )));
    }
    if p == 0.0 {
        return Ok(t0);
    }
    let t0n = t0.powi(n as i32);
    let u = p / (sigma_v * t0n);
    if u < -1.0 {
        return Err(Error::Domain(format!(
            "power {p:e} W below the floor −ΣV·T0ⁿ = {:e} W",
            -sigma_v * t0n
        )));
    }
    Ok(t0 * (u.ln_1p() / n as f64).exp())
}

/// Joule power ½·I²·R dissipated by the heater junction.
pub fn heater_power(current: f64, r_heater: f64) -> f64 {
    0.5 * current * current * r_heater
}

/// (P_on − P_off)/P_on, with "on" at half a flux quantum and "off" at zero
/// flux.
pub fn switching_ratio(p_on: f64, p_off: f64) -> Result<f64> {
    if p_on == 0.0 || !p_on.is_finite() {
        return Err(Error::UndefinedRatio);
    }
    Ok((p_on - p_off) / p_on)
}
