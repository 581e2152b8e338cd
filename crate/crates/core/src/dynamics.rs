// SPDX-License-Identifier: Apache-2.0

//! Golden-rule rates, steady-state populations and transported power.

use nalgebra::{DMatrix, DVector};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::noise::{Filter, NoiseChannel};
use crate::params::DeviceParams;
use crate::spectrum::{self, EigenSystem, Mat4};

/// Magnitudes |⟨ψᵢ|∂H/∂Φ|ψⱼ⟩| in amperes.
///
/// ∂H/∂Φ has three pieces in the single-excitation basis: the transverse
/// qubit term (f_q0/f_q)·Ip coupling |g00⟩↔|e00⟩, the longitudinal term
/// 2·Ip·√(1 − (f_q0/f_q)²) on |e00⟩, and the flux dependence of each
/// qubit–resonator coupling, 2·Ip·(g_i/f_q0)·(f_q0/f_q)², which links |g00⟩
/// with |g10⟩ and |g01⟩ through the factor (2b†b − 1) = −1. The ground-state
/// elements read
///
/// M_0k = a_k1·(f_q0/f_q)·Ip − a_k2·c₁ − a_k3·c₂
///
/// and between two single-excitation states
///
/// M_kl = a_k1·a_l1·2·Ip·√(1 − (f_q0/f_q)²).
pub fn matrix_elements(eig: &EigenSystem, params: &DeviceParams) -> Mat4 {
    let a = &eig.coeffs;
    let ratio = params.fq0 / eig.fq;
    let transverse = ratio * params.ip;
    let longitudinal = 2.0 * params.ip * (1.0 - ratio * ratio).max(0.0).sqrt();
    // (h g / Φ₀)·(Ip / (e f_q0)) = 2·Ip·g/f_q0 since h/Φ₀ = 2e.
    let c1 = 2.0 * params.ip * params.g1 / params.fq0 * ratio * ratio;
    let c2 = 2.0 * params.ip * params.g2 / params.fq0 * ratio * ratio;

    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (u, v) = (&a[i], &a[j]);
            let elem = (u[0] * v[1] + u[1] * v[0]) * transverse
                - (u[0] * v[2] + u[2] * v[0]) * c1
                - (u[0] * v[3] + u[3] * v[0]) * c2
                + u[1] * v[1] * longitudinal;
            m[i][j] = elem.abs();
            m[j][i] = elem.abs();
        }
    }
    m
}

/// Transition rates induced by each reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// Γ⁽¹⁾_{i→j} in 1/s, `gamma_r1[i][j]`; zero diagonal.
    pub gamma_r1: Mat4,
    pub gamma_r2: Mat4,
    /// ω_ij = (E_i − E_j)/ħ in rad/s.
    pub omega: Mat4,
}

impl RateSet {
    /// Γ_{i→j} summed over both reservoirs.
    pub fn total(&self) -> Mat4 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.gamma_r1[i][j] + self.gamma_r2[i][j]))
    }

    pub fn reservoir(&self, r: Reservoir) -> &Mat4 {
        match r {
            Reservoir::One => &self.gamma_r1,
            Reservoir::Two => &self.gamma_r2,
        }
    }

    /// True when no rate enters or leaves state `k`.
    pub fn is_isolated(&self, k: usize) -> bool {
        let t = self.total();
        (0..4).all(|j| t[k][j] == 0.0 && t[j][k] == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reservoir {
    One,
    Two,
}

/// Γ⁽ʳ⁾_{i→j} = |M_ij|²·S_Φ⁽ʳ⁾(ω_ij)/ħ².
///
/// Downward transitions (ω_ij > 0) sample the emission side of the spectrum,
/// upward ones the absorption side.
pub fn transition_rates(elems: &Mat4, eig: &EigenSystem, channels: &[NoiseChannel; 2]) -> RateSet {
    let omega: Mat4 = std::array::from_fn(|i| {
        std::array::from_fn(|j| (eig.energies[i] - eig.energies[j]) / HBAR)
    });
    let rates = |ch: &NoiseChannel| -> Mat4 {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j || elems[i][j] == 0.0 {
                    0.0
                } else {
                    elems[i][j] * elems[i][j] * ch.flux_noise(omega[i][j]) / (HBAR * HBAR)
                }
            })
        })
    };
    RateSet {
        gamma_r1: rates(&channels[0]),
        gamma_r2: rates(&channels[1]),
        omega,
    }
}

/// Noise channels of the two reservoirs, each behind its own resonator.
pub fn reservoir_channels(params: &DeviceParams, t1: f64, t2: f64) -> Result<[NoiseChannel; 2]> {
    Ok([
        NoiseChannel::new(
            t1,
            params.r,
            Filter::Resonator {
                f_r: params.fr1,
                z_inf: params.z_inf,
            },
            params.m,
        )?,
        NoiseChannel::new(
            t2,
            params.r,
            Filter::Resonator {
                f_r: params.fr2,
                z_inf: params.z_inf,
            },
            params.m,
        )?,
    ])
}

fn normalized_total(rates: &RateSet) -> Result<Mat4> {
    let t = rates.total();
    let max = t.iter().flatten().fold(0.0f64, |a, &x| a.max(x));
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::DegenerateSystem(
            "all transition rates vanish".into(),
        ));
    }
    Ok(t.map(|row| row.map(|x| x / max)))
}

/// Steady-state populations from the three-level closed form (dark state
/// empty):
///
/// ρ₀ ∝ Γ₂₀Γ₃₀ + Γ₂₃Γ₃₀ + Γ₂₀Γ₃₂,
/// ρ₂ ∝ Γ₀₂Γ₃₀ + Γ₀₂Γ₃₂ + Γ₀₃Γ₃₂,
/// ρ₃ ∝ Γ₀₃Γ₂₀ + Γ₀₂Γ₂₃ + Γ₀₃Γ₂₃.
///
/// Rates touching state 1 are ignored; use [`steady_state`] when they may
/// be nonzero.
pub fn steady_state_closed_form(rates: &RateSet) -> Result<[f64; 4]> {
    let g = normalized_total(rates)?;
    let a = g[2][0] * g[3][0] + g[2][3] * g[3][0] + g[2][0] * g[3][2];
    let b = g[0][2] * g[3][0] + g[0][2] * g[3][2] + g[0][3] * g[3][2];
    let c = g[0][3] * g[2][0] + g[0][2] * g[2][3] + g[0][3] * g[2][3];
    let sum = a + b + c;
    if !(sum > 0.0) {
        return Err(Error::DegenerateSystem(
            "no connected cycle among states 0, 2 and 3".into(),
        ));
    }
    Ok([a / sum, 0.0, b / sum, c / sum])
}

/// Steady state of the full four-level rate equation by a direct linear
/// solve. States with no rates at all are assigned zero population; the
/// remaining states must form a single connected component.
pub fn steady_state_generic(rates: &RateSet) -> Result<[f64; 4]> {
    let g = normalized_total(rates)?;
    let active: Vec<usize> = (0..4)
        .filter(|&k| (0..4).any(|j| g[k][j] != 0.0 || g[j][k] != 0.0))
        .collect();
    let n = active.len();
    // Generator: dρ_i/dt = Σ_j Γ_{j→i} ρ_j − Σ_j Γ_{i→j} ρ_i.
    let mut q = DMatrix::<f64>::zeros(n, n);
    for (ii, &i) in active.iter().enumerate() {
        for (jj, &j) in active.iter().enumerate() {
            if i != j {
                q[(ii, jj)] += g[j][i];
                q[(ii, ii)] -= g[i][j];
            }
        }
    }
    for jj in 0..n {
        q[(n - 1, jj)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;
    let sol = q
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateSystem("rate matrix is reducible".into()))?;
    let mut rho = [0.0; 4];
    for (ii, &i) in active.iter().enumerate() {
        let p = sol[ii];
        if !p.is_finite() || p < -1e-12 {
            return Err(Error::DegenerateSystem("rate matrix is reducible".into()));
        }
        rho[i] = p.max(0.0);
    }
    Ok(rho)
}

/// Steady-state populations; closed form when the dark state is decoupled
/// and the other three states form a cycle, linear solve otherwise.
pub fn steady_state(rates: &RateSet) -> Result<[f64; 4]> {
    if rates.is_isolated(1) {
        steady_state_closed_form(rates).or_else(|_| steady_state_generic(rates))
    } else {
        steady_state_generic(rates)
    }
}

/// Net power delivered into reservoir `r`, Σ_{k,l} ρ_k·ħω_kl·Γ⁽ʳ⁾_{k→l}.
pub fn power_into(rho: &[f64; 4], rates: &RateSet, r: Reservoir) -> f64 {
    let gamma = rates.reservoir(r);
    let mut p = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            if k != l {
                p += rho[k] * HBAR * rates.omega[k][l] * gamma[k][l];
            }
        }
    }
    p
}

/// P₁→₂: power absorbed by reservoir 2 (positive when it heats up).
pub fn transported_power(rho: &[f64; 4], rates: &RateSet) -> f64 {
    power_into(rho, rates, Reservoir::Two)
}

/// Populations together with the power delivered to each reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub rho: [f64; 4],
    /// Power into reservoir 2 (W).
    pub power_to2: f64,
    /// Power into reservoir 1 (W); equals −`power_to2` in steady state.
    pub power_to1: f64,
}

impl SteadyState {
    pub fn solve(rates: &RateSet) -> Result<Self> {
        let rho = steady_state(rates)?;
        Ok(SteadyState {
            rho,
            power_to2: power_into(&rho, rates, Reservoir::Two),
            power_to1: power_into(&rho, rates, Reservoir::One),
        })
    }
}

/// Everything the pipeline produces at one flux point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub flux_frac: f64,
    pub fq: f64,
    pub eigen: EigenSystem,
    pub rates: RateSet,
    pub state: SteadyState,
}

/// Eigenstates → matrix elements → rates → steady state at one flux point
/// with reservoir temperatures `t1` and `t2`.
pub fn evaluate_point(
    params: &DeviceParams,
    flux_frac: f64,
    t1: f64,
    t2: f64,
) -> Result<PointResult> {
    let eigen = spectrum::eigensystem(params, flux_frac)?;
    let elems = matrix_elements(&eigen, params);
    let channels = reservoir_channels(params, t1, t2)?;
    let rates = transition_rates(&elems, &eigen, &channels);
    let state = SteadyState::solve(&rates)?;
    Ok(PointResult {
        flux_frac,
        fq: eigen.fq,
        eigen,
        rates,
        state,
    })
}

/// Shorthand for the power into reservoir 2 at one flux point.
pub fn power_at(params: &DeviceParams, flux_frac: f64, t1: f64, t2: f64) -> Result<f64> {
    Ok(evaluate_point(params, flux_frac, t1, t2)?.state.power_to2)
}

/// Thermal factor used by the bare-resistor estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occupation {
    /// Bose factor 1/(e^{βħω} − 1), as in the quoted central-peak estimate.
    #[default]
    Bose,
    /// 1/(1 − e^{−βħω}) = n + 1, which is what ½ħωΓ↑ with the quantum
    /// spectrum literally gives. One quantum larger than `Bose`.
    BosePlusOne,
}

impl Occupation {
    fn factor(self, x: f64) -> f64 {
        match self {
            Occupation::Bose => 1.0 / x.exp_m1(),
            Occupation::BosePlusOne => 1.0 / -(-x).exp_m1(),
        }
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("temperature must be > 0, got {t}")))
    }
}

/// Central-peak estimate for a qubit coupled inductively to a bare resistor
/// at temperature `t1`:
///
/// Q̇ = Ip²·M²·R·ω²/(R² + ω²L²) · n(ω),  ω = 2π f_q(Φ).
///
/// With M = L this is Ip²·R·(ωL)²/(R² + (ωL)²) · n(ω).
pub fn bare_resistor_power_with(
    params: &DeviceParams,
    t1: f64,
    flux_frac: f64,
    occupation: Occupation,
) -> Result<f64> {
    check_temperature(t1)?;
    let omega = 2.0 * std::f64::consts::PI * spectrum::qubit_frequency(params, flux_frac)?;
    let x = HBAR * omega / (K_B * t1);
    let (r, l, m) = (params.r, params.l, params.m);
    let wl = omega * l;
    Ok(params.ip.powi(2) * m * m * r * omega * omega / (r * r + wl * wl) * occupation.factor(x))
}

pub fn bare_resistor_power(params: &DeviceParams, t1: f64, flux_frac: f64) -> Result<f64> {
    bare_resistor_power_with(params, t1, flux_frac, Occupation::Bose)
}

/// Coupling inductance R/ω matching the resistor to the qubit frequency.
pub fn optimal_inductance(params: &DeviceParams, flux_frac: f64) -> Result<f64> {
    let omega = 2.0 * std::f64::consts::PI * spectrum::qubit_frequency(params, flux_frac)?;
    Ok(params.r / omega)
}

/// Bare-resistor power at the matching point L = M = R/ω:
/// Ip²·R/2 · n(ω) = ½·Ip²·L·ω·n(ω). For fixed L = M this is the maximum
/// over R.
pub fn bare_resistor_max_power(params: &DeviceParams, t1: f64, flux_frac: f64) -> Result<f64> {
    check_temperature(t1)?;
    let omega = 2.0 * std::f64::consts::PI * spectrum::qubit_frequency(params, flux_frac)?;
    let x = HBAR * omega / (K_B * t1);
    Ok(0.5 * params.ip.powi(2) * params.r / x.exp_m1())
}
