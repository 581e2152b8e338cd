// SPDX-License-Identifier: Apache-2.0

//! Qubit dispersion and the single-excitation Hamiltonian.
//!
//! Basis order throughout the crate is `{|g00⟩, |e00⟩, |g10⟩, |g01⟩}`:
//! qubit ground/excited, then the photon number of resonator 1 and 2.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::constants::{H, PHI0};
use crate::error::{Error, Result};
use crate::jacobi::symmetric_eigen;
use crate::params::DeviceParams;

/// Dense 4×4 real matrix, row major.
pub type Mat4 = [[f64; 4]; 4];

/// Slope of the qubit detuning ε(Φ) in Hz per unit of Φ/Φ₀.
pub fn detuning_slope(params: &DeviceParams) -> f64 {
    2.0 * params.ip * PHI0 / H
}

/// Offset from the sweet spot after reducing the flux to one period and
/// mirroring about one half. Always in `[0, 0.5]`.
pub fn sweet_spot_offset(flux_frac: f64) -> f64 {
    (flux_frac.rem_euclid(1.0) - 0.5).abs()
}

fn check_flux(flux_frac: f64) -> Result<()> {
    if flux_frac.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "flux fraction must be finite, got {flux_frac}"
        )))
    }
}

/// Qubit transition frequency f_q(Φ) = √(f_q0² + ε²) with
/// ε = 2·Ip·Φ₀·(Φ/Φ₀ − ½)/h, periodic in Φ₀.
pub fn qubit_frequency(params: &DeviceParams, flux_frac: f64) -> Result<f64> {
    params.validate()?;
    check_flux(flux_frac)?;
    Ok(qubit_frequency_unchecked(params, flux_frac))
}

pub(crate) fn qubit_frequency_unchecked(params: &DeviceParams, flux_frac: f64) -> f64 {
    let eps = detuning_slope(params) * sweet_spot_offset(flux_frac);
    params.fq0.hypot(eps)
}

/// Flux fraction in `[0.5, 1)` at which the qubit reaches `frequency`, or
/// `None` if the frequency is below the sweet-spot minimum or beyond half a
/// period.
pub fn flux_for_frequency(params: &DeviceParams, frequency: f64) -> Option<f64> {
    if !(frequency >= params.fq0) {
        return None;
    }
    let offset =
        ((frequency - params.fq0) * (frequency + params.fq0)).sqrt() / detuning_slope(params);
    (offset < 0.5).then_some(0.5 + offset)
}

/// Single-excitation Hamiltonian in joules.
pub fn build_hamiltonian(params: &DeviceParams, flux_frac: f64) -> Result<Mat4> {
    let fq = qubit_frequency(params, flux_frac)?;
    Ok(hamiltonian_from(params, fq))
}

fn hamiltonian_from(p: &DeviceParams, fq: f64) -> Mat4 {
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, H * fq, -H * p.g1, -H * p.g2],
        [0.0, -H * p.g1, H * p.fr1, H * p.gamma12],
        [0.0, -H * p.g2, H * p.gamma12, H * p.fr2],
    ]
}

/// Eigen-decomposition of the single-excitation Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    /// Eigenenergies in joules, in the order of `coeffs`.
    pub energies: [f64; 4],
    /// `coeffs[k][i]` is a_ki in |ψ_k⟩ = Σᵢ a_ki |i⟩.
    pub coeffs: Mat4,
    /// Qubit frequency the system was built with (Hz).
    pub fq: f64,
    pub flux_frac: f64,
}

impl EigenSystem {
    /// Overlap ⟨ψ_k(self)|ψ_l(other)⟩.
    pub fn overlap(&self, k: usize, other: &EigenSystem, l: usize) -> f64 {
        (0..4).map(|i| self.coeffs[k][i] * other.coeffs[l][i]).sum()
    }

    /// Reorders the eigenpairs so that state `k` has the largest possible
    /// total overlap with state `k` of `reference`.
    pub fn aligned_to(&self, reference: &EigenSystem) -> EigenSystem {
        let mut best = [0usize, 1, 2, 3];
        let mut best_score = f64::NEG_INFINITY;
        for perm in permutations4() {
            let score: f64 = (0..4)
                .map(|k| reference.overlap(k, self, perm[k]).abs())
                .sum();
            if score > best_score {
                best_score = score;
                best = perm;
            }
        }
        EigenSystem {
            energies: std::array::from_fn(|k| self.energies[best[k]]),
            coeffs: std::array::from_fn(|k| self.coeffs[best[k]]),
            ..*self
        }
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Closed-form eigen-decomposition for identical resonators and couplings.
///
/// States are ordered ground, dark, lower hybrid, upper hybrid. The dark
/// state (|g10⟩ − |g01⟩)/√2 sits at f_r − γ; the symmetric resonator mode at
/// f_r + γ hybridizes with the qubit with coupling √2·g. With γ = 0 this is
/// {0, h f_r, (h/2)[f_q + f_r ∓ √((f_q − f_r)² + 8g²)]}.
pub fn eigensystem_closed_form(params: &DeviceParams, flux_frac: f64) -> Result<EigenSystem> {
    params.validate()?;
    check_flux(flux_frac)?;
    if !params.is_symmetric() {
        return Err(Error::Unsupported(
            "closed-form eigenstates need fr1 == fr2 and g1 == g2; use eigensystem_numeric".into(),
        ));
    }
    let fq = qubit_frequency_unchecked(params, flux_frac);
    Ok(closed_form_unchecked(params, fq, flux_frac))
}

fn closed_form_unchecked(p: &DeviceParams, fq: f64, flux_frac: f64) -> EigenSystem {
    let g = p.g1;
    let f_sym = p.fr1 + p.gamma12;
    let f_dark = p.fr1 - p.gamma12;
    let d = fq - f_sym;
    let s = d.hypot(8f64.sqrt() * g);

    let sum = fq + f_sym;
    let prod = fq * f_sym - 2.0 * g * g;
    // Evaluate the root of larger magnitude directly and recover the other
    // from the product, so neither branch loses digits to cancellation.
    let (lower, upper) = if sum >= 0.0 {
        let upper = 0.5 * (sum + s);
        (if upper != 0.0 { prod / upper } else { 0.0 }, upper)
    } else {
        let lower = 0.5 * (sum - s);
        (lower, prod / lower)
    };

    let (psi2, psi3) = if g > 0.0 {
        // Qubit components −f_q + f_r ± s, written without cancellation.
        let x2 = if d > 0.0 {
            8.0 * g * g / (s + d)
        } else {
            s - d
        };
        let x3 = if d < 0.0 {
            -8.0 * g * g / (s - d)
        } else {
            -(s + d)
        };
        (
            normalize([0.0, x2, 2.0 * g, 2.0 * g]),
            normalize([0.0, x3, 2.0 * g, 2.0 * g]),
        )
    } else {
        let sym = [0.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        if d < 0.0 {
            ([0.0, 1.0, 0.0, 0.0], sym)
        } else if d > 0.0 {
            (sym, [0.0, -1.0, 0.0, 0.0])
        } else {
            // g -> 0 limit taken at exact resonance.
            (
                [0.0, FRAC_1_SQRT_2, 0.5, 0.5],
                [0.0, -FRAC_1_SQRT_2, 0.5, 0.5],
            )
        }
    };

    EigenSystem {
        energies: [0.0, H * f_dark, H * lower, H * upper],
        coeffs: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            psi2,
            psi3,
        ],
        fq,
        flux_frac,
    }
}

fn normalize(v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

/// Largest |A_ij − A_ji| relative to the largest |A_ij|.
pub fn relative_asymmetry(m: &Mat4) -> f64 {
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst / scale
}

/// Numeric eigen-decomposition of a symmetric 4×4 matrix.
///
/// Energies come out ascending and each eigenvector is signed so that its
/// first non-negligible coefficient is positive. `fq` is read off the
/// `|e00⟩` diagonal entry.
pub fn eigensystem_numeric(matrix: &Mat4, flux_frac: f64) -> Result<EigenSystem> {
    let asym = relative_asymmetry(matrix);
    if !(asym <= 1e-12) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let eig = symmetric_eigen(matrix);
    let coeffs = eig.vectors.map(|mut v| {
        if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
            if first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        v
    });
    Ok(EigenSystem {
        energies: eig.values,
        coeffs,
        fq: matrix[1][1] / H,
        flux_frac,
    })
}

/// Eigen-decomposition used by the transport pipeline: closed form for
/// symmetric devices, numeric otherwise.
pub fn eigensystem(params: &DeviceParams, flux_frac: f64) -> Result<EigenSystem> {
    params.validate()?;
    check_flux(flux_frac)?;
    let fq = qubit_frequency_unchecked(params, flux_frac);
    if params.is_symmetric() {
        Ok(closed_form_unchecked(params, fq, flux_frac))
    } else {
        eigensystem_numeric(&hamiltonian_from(params, fq), flux_frac)
    }
}
