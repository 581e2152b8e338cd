// SPDX-License-Identifier: Apache-2.0

//! Current and flux noise of a resistive reservoir as seen by the qubit.
//!
//! Spectra are quantum (asymmetric) densities: positive ω is emission into
//! the bath, negative ω absorption from it, and S(ω)/S(−ω) = e^{ħω/k_BT}.

use std::f64::consts::PI;

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};

/// ħω / (1 − e^{−ħω/k_BT}), continuous through ω = 0 where it equals k_BT.
pub fn quantum_occupation_energy(temperature: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        return K_B * temperature;
    }
    let energy = HBAR * omega;
    let x = energy / (K_B * temperature);
    // -expm1(-x) overflows to -inf for very negative ω; the quotient is then 0.
    energy / -(-x).exp_m1()
}

/// Bare current-noise density of a resistor, 2ħω / [R(1 − e^{−ħω/k_BT})]
/// in A²·s. At ω = 0 this is the Johnson–Nyquist value 2k_BT/R.
pub fn bare_current_noise(r: f64, temperature: f64, omega: f64) -> f64 {
    2.0 * quantum_occupation_energy(temperature, omega) / r
}

/// Power transmission |t|² of a λ/2 line between a source of impedance R and
/// a line of impedance Z∞, evaluated at frequency `f` (Hz).
pub fn resonator_transmission(f: f64, f_r: f64, r: f64, z_inf: f64) -> f64 {
    let (s, c) = (PI * f / f_r).sin_cos();
    let z = z_inf / r;
    1.0 / (c * c + z * z * s * s)
}

/// How the reservoir current reaches the qubit loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Filter {
    /// Through a resistively terminated half-wave resonator.
    Resonator { f_r: f64, z_inf: f64 },
    /// Direct inductive coupling through a series inductance `l` (H).
    Inductive { l: f64 },
}

/// Noise source for one reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChannel {
    /// Reservoir electron temperature (K).
    pub temperature: f64,
    /// Reservoir resistance (Ω).
    pub r: f64,
    pub filter: Filter,
    /// Mutual inductance to the qubit (H).
    pub m: f64,
}

impl NoiseChannel {
    pub fn new(temperature: f64, r: f64, filter: Filter, m: f64) -> Result<Self> {
        let ch = NoiseChannel {
            temperature,
            r,
            filter,
            m,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::Domain(format!(
                "reservoir temperature must be > 0, got {}",
                self.temperature
            )));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::param("R", "must be > 0"));
        }
        if !self.m.is_finite() {
            return Err(Error::param("M", "must be finite"));
        }
        match self.filter {
            Filter::Resonator { f_r, z_inf } => {
                if !(f_r.is_finite() && f_r > 0.0) {
                    return Err(Error::param("fr", "must be > 0"));
                }
                if !(z_inf.is_finite() && z_inf > 0.0) {
                    return Err(Error::param("Zinf", "must be > 0"));
                }
            }
            Filter::Inductive { l } => {
                if !(l.is_finite() && l >= 0.0) {
                    return Err(Error::param("L", "must be >= 0"));
                }
            }
        }
        Ok(())
    }

    /// Flux-noise density S_Φ(ω) in Wb²·s.
    ///
    /// The resonator filter is evaluated at |ω|/2π; the sign of ω only enters
    /// through the bare quantum spectrum.
    pub fn flux_noise(&self, omega: f64) -> f64 {
        let m2 = self.m * self.m;
        match self.filter {
            Filter::Resonator { f_r, z_inf } => {
                let t2 = resonator_transmission(omega.abs() / (2.0 * PI), f_r, self.r, z_inf);
                m2 * t2 * bare_current_noise(self.r, self.temperature, omega)
            }
            Filter::Inductive { l } => {
                let wl = omega * l;
                2.0 * m2 * self.r / (self.r * self.r + wl * wl)
                    * quantum_occupation_energy(self.temperature, omega)
            }
        }
    }
}

/// Free-function form of [`NoiseChannel::flux_noise`].
pub fn flux_noise(channel: &NoiseChannel, omega: f64) -> f64 {
    channel.flux_noise(omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: f64 = 0.3;
    const W7: f64 = 2.0 * PI * 7e9;

    fn resonator() -> NoiseChannel {
        NoiseChannel::new(
            T,
            6.0,
            Filter::Resonator {
                f_r: 7e9,
                z_inf: 50.0,
            },
            0.8e-9,
        )
        .unwrap()
    }

    fn inductive() -> NoiseChannel {
        NoiseChannel::new(T, 6.0, Filter::Inductive { l: 0.8e-9 }, 0.8e-9).unwrap()
    }

    #[test]
    fn johnson_nyquist_limit() {
        let want = 2.0 * K_B * T / 6.0;
        assert_eq!(bare_current_noise(6.0, T, 0.0), want);
        let near = bare_current_noise(6.0, T, 1e-3);
        assert!(((near - want) / want).abs() < 1e-12);
    }

    #[test]
    fn bare_noise_value_at_7ghz() {
        // 40-digit evaluation of 2ħω/[R(1 − e^{−ħω/k_BT})].
        let got = bare_current_noise(6.0, T, W7);
        assert!(((got - 2.295_040_714_304_386e-24) / got).abs() < 1e-13);
    }

    #[test]
    fn bare_noise_detailed_balance() {
        let ratio = bare_current_noise(6.0, T, W7) / bare_current_noise(6.0, T, -W7);
        let want = (HBAR * W7 / (K_B * T)).exp();
        assert!(((ratio - want) / want).abs() < 1e-13);
    }

    #[test]
    fn cold_bath_absorbs_nothing() {
        assert_eq!(bare_current_noise(6.0, 1e-9, -W7), 0.0);
        let emit = bare_current_noise(6.0, 1e-9, W7);
        assert!(((emit - 2.0 * HBAR * W7 / 6.0) / emit).abs() < 1e-15);
    }

    #[test]
    fn transmission_passbands() {
        assert!((resonator_transmission(7e9, 7e9, 6.0, 50.0) - 1.0).abs() < 1e-15);
        for n in 2..5 {
            let t = resonator_transmission(n as f64 * 7e9, 7e9, 6.0, 50.0);
            assert!((t - 1.0).abs() < 1e-12);
        }
        let half = resonator_transmission(3.5e9, 7e9, 6.0, 50.0);
        assert!((half - 0.0144).abs() < 1e-15);
        assert_eq!(resonator_transmission(0.0, 7e9, 6.0, 50.0), 1.0);
    }

    #[test]
    fn transmission_bounds() {
        for i in 0..1000 {
            let f = i as f64 * 0.037e9;
            let t = resonator_transmission(f, 7e9, 6.0, 50.0);
            assert!((0.0144 - 1e-15..=1.0 + 1e-12).contains(&t));
        }
    }

    #[test]
    fn filters_at_special_points() {
        let ch = resonator();
        let want = 0.64e-18 * bare_current_noise(6.0, T, W7);
        assert!(((ch.flux_noise(W7) - want) / want).abs() < 1e-13);

        let ind = inductive();
        let want = 2.0 * 0.64e-18 * K_B * T / 6.0;
        assert!(((ind.flux_noise(0.0) - want) / want).abs() < 1e-15);
    }

    #[test]
    fn inductive_high_frequency_slope() {
        // With ωL ≫ R and ħω ≫ k_BT the density falls as 1/ω. Measure the
        // log-log slope by finite differences over one decade.
        let ch = NoiseChannel::new(0.01, 6.0, Filter::Inductive { l: 1e-6 }, 1e-9).unwrap();
        let w0 = 2.0 * PI * 20e9;
        let w1 = 10.0 * w0;
        let slope = (ch.flux_noise(w1).ln() - ch.flux_noise(w0).ln()) / 10f64.ln();
        assert!((slope + 1.0).abs() < 1e-4, "slope {slope}");
    }

    #[test]
    fn channel_validation() {
        assert!(NoiseChannel::new(0.0, 6.0, Filter::Inductive { l: 1e-9 }, 1e-9).is_err());
        assert!(NoiseChannel::new(0.1, -6.0, Filter::Inductive { l: 1e-9 }, 1e-9).is_err());
        assert!(NoiseChannel::new(
            0.1,
            6.0,
            Filter::Resonator {
                f_r: 0.0,
                z_inf: 50.0
            },
            1e-9
        )
        .is_err());
    }
}
