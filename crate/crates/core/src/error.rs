// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("rate matrix has no unique steady state: {0}")]
    DegenerateSystem(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("switching ratio undefined for zero on-state power")]
    UndefinedRatio,

    #[error("calibration needs at least {needed} points in the {range} range, found {found}")]
    InsufficientPoints {
        range: &'static str,
        needed: usize,
        found: usize,
    },

    #[error("calibration data is not monotone: {0}")]
    NonMonotone(String),

    #[error("voltage {voltage:e} V outside calibrated span [{min:e}, {max:e}] V")]
    Extrapolation { voltage: f64, min: f64, max: f64 },

    #[error(
        "T2 self-consistency did not converge at flux {flux} after {iterations} iterations \
         (last step {residual:e} K)"
    )]
    Convergence {
        flux: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } => 2,
            Error::Convergence { .. } => 3,
            _ => 1,
        }
    }
}
