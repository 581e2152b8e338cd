// SPDX-License-Identifier: Apache-2.0

//! Physical constants (SI, exact 2019 definitions).

use std::f64::consts::PI;

/// Planck constant (J·s).
pub const H: f64 = 6.626_070_15e-34;
/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = H / (2.0 * PI);
/// Superconducting flux quantum h/2e (Wb).
pub const PHI0: f64 = H / (2.0 * E_CHARGE);

/// Bundle of the constants used by the model.
///
/// The simulator itself reads the module-level constants; this struct exists
/// so the validation suite can be pointed at an arbitrary set of values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub h: f64,
    pub hbar: f64,
    pub k_b: f64,
    pub e: f64,
    pub phi0: f64,
}

impl PhysConstants {
    pub const SI: PhysConstants = PhysConstants {
        h: H,
        hbar: HBAR,
        k_b: K_B,
        e: E_CHARGE,
        phi0: PHI0,
    };

    /// Relative deviation of `phi0` from h/2e and of `hbar` from h/2π; the
    /// larger of the two.
    pub fn consistency_error(&self) -> f64 {
        let phi0 = self.h / (2.0 * self.e);
        let hbar = self.h / (2.0 * PI);
        let d_phi = ((self.phi0 - phi0) / phi0).abs();
        let d_hbar = ((self.hbar - hbar) / hbar).abs();
        d_phi.max(d_hbar)
    }
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self::SI
    }
}
