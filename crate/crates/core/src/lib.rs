// SPDX-License-Identifier: Apache-2.0

//! Heat transport between two resistive reservoirs through a flux qubit
//! coupled to a pair of quarter-wave resonators.
//!
//! The pipeline for one flux point is: [`spectrum`] builds and diagonalizes
//! the single-excitation Hamiltonian, [`noise`] supplies the filtered flux
//! noise of each reservoir, [`dynamics`] turns both into transition rates, a
//! steady state and the transported power. [`sweep`] repeats that over a flux
//! grid and annotates peaks; [`thermal`] and [`calibration`] cover the
//! electron-phonon balance and thermometer conversion.
//!
//! ```
//! use heatvalve::{power_at, DeviceParams};
//!
//! let p = DeviceParams::default();
//! let watts = power_at(&p, 0.5, 0.3, 0.08).unwrap();
//! assert!(watts > 1e-15 && watts < 1e-14);
//! ```

// Negated comparisons reject NaN; index loops mirror the matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod calibration;
pub mod commands;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod jacobi;
pub mod manifest;
pub mod noise;
pub mod params;
pub mod spectrum;
pub mod sweep;
pub mod thermal;
pub mod validate;

pub use calibration::{
    fit_calibration, voltage_to_temperature, CalibrationCurve, CalibrationPoint, LogBranch,
};
pub use constants::PhysConstants;
pub use dynamics::{
    bare_resistor_max_power, bare_resistor_power, evaluate_point, matrix_elements, power_at,
    steady_state, transition_rates, Occupation, PointResult, RateSet, SteadyState,
};
pub use error::{Error, Result};
pub use noise::{flux_noise, Filter, NoiseChannel};
pub use params::{DeviceParams, Preset};
pub use spectrum::{eigensystem, qubit_frequency, EigenSystem};
pub use sweep::{run_sweep, switching_curve, Peak, PeakKind, SweepConfig, SweepResult, T2Mode};
pub use thermal::{ep_power, heater_power, invert_ep_power, switching_ratio};
pub use validate::{run_validation, ValidationReport};
