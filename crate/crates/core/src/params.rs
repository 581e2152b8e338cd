// SPDX-License-Identifier: Apache-2.0

//! Device parameterization and its config-file schema.
//!
//! Config keys match the field names of the schema below; all values are SI.
//!
//! | key       | unit      | default (`model`) |
//! |-----------|-----------|-------------------|
//! | `R`       | Ω         | 6                 |
//! | `L`       | H         | 0.8e-9            |
//! | `M`       | H         | 0.8e-9            |
//! | `Ip`      | A         | 30e-9             |
//! | `fq0`     | Hz        | 2e9               |
//! | `fr1`     | Hz        | 7e9               |
//! | `fr2`     | Hz        | 7e9               |
//! | `g1`      | Hz        | 0.2e9             |
//! | `g2`      | Hz        | 0.2e9             |
//! | `gamma12` | Hz        | 0                 |
//! | `Zinf`    | Ω         | 50                |
//! | `sigmaV1` | W·K⁻ⁿ     | 9.35e-10          |
//! | `sigmaV2` | W·K⁻ⁿ     | 11.44e-10         |
//! | `nExp`    | –         | 5                 |
//!
//! An optional `preset = model | spectroscopy` line selects the base values
//! before the other keys are applied. `spectroscopy` carries the values read
//! off the separate read-out device (Ip = 21 nA, fq0 = 4.0 GHz, fr = 6.4 GHz).

use std::fmt::Write as _;
use std::path::Path;

use crate::config::{self, Entry};
use crate::error::{Error, Result};

/// Circuit constants of the qubit–resonator–reservoir network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// Reservoir resistance terminating each resonator (Ω).
    pub r: f64,
    /// Coupling inductance (H).
    pub l: f64,
    /// Mutual inductance between the resonator current and the qubit loop (H).
    pub m: f64,
    /// Persistent current (A).
    pub ip: f64,
    /// Qubit frequency at the sweet spot (Hz).
    pub fq0: f64,
    pub fr1: f64,
    pub fr2: f64,
    /// Qubit–resonator couplings (Hz).
    pub g1: f64,
    pub g2: f64,
    /// Resonator–resonator coupling (Hz).
    pub gamma12: f64,
    /// Transmission-line impedance (Ω).
    pub z_inf: f64,
    /// Electron–phonon prefactors ΣV of each reservoir (W·K⁻ⁿ).
    pub sigma_v1: f64,
    pub sigma_v2: f64,
    /// Electron–phonon exponent.
    pub n_exp: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Values used for the heat-transport model.
    Model,
    /// Values extracted from two-tone spectroscopy of the read-out device.
    Spectroscopy,
}

impl Preset {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "model" => Some(Preset::Model),
            "spectroscopy" => Some(Preset::Spectroscopy),
            _ => None,
        }
    }
}

const KEYS: [&str; 14] = [
    "R", "L", "M", "Ip", "fq0", "fr1", "fr2", "g1", "g2", "gamma12", "Zinf", "sigmaV1", "sigmaV2",
    "nExp",
];

impl Default for DeviceParams {
    fn default() -> Self {
        Self::preset(Preset::Model)
    }
}

impl DeviceParams {
    pub fn preset(preset: Preset) -> Self {
        let model = DeviceParams {
            r: 6.0,
            l: 0.8e-9,
            m: 0.8e-9,
            ip: 30e-9,
            fq0: 2e9,
            fr1: 7e9,
            fr2: 7e9,
            g1: 0.2e9,
            g2: 0.2e9,
            gamma12: 0.0,
            z_inf: 50.0,
            sigma_v1: 9.35e-10,
            sigma_v2: 11.44e-10,
            n_exp: 5,
        };
        match preset {
            Preset::Model => model,
            Preset::Spectroscopy => DeviceParams {
                ip: 21e-9,
                fq0: 4.0e9,
                fr1: 6.4e9,
                fr2: 6.4e9,
                ..model
            },
        }
    }

    /// True when both resonators and both couplings are identical.
    pub fn is_symmetric(&self) -> bool {
        self.fr1 == self.fr2 && self.g1 == self.g2
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("R", self.r),
            ("L", self.l),
            ("M", self.m),
            ("Ip", self.ip),
            ("fq0", self.fq0),
            ("fr1", self.fr1),
            ("fr2", self.fr2),
            ("Zinf", self.z_inf),
            ("sigmaV1", self.sigma_v1),
            ("sigmaV2", self.sigma_v2),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        for (name, v) in [("g1", self.g1), ("g2", self.g2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        if !self.gamma12.is_finite() {
            return Err(Error::param("gamma12", "must be finite"));
        }
        if self.n_exp < 3 {
            return Err(Error::param(
                "nExp",
                format!("must be >= 3, got {}", self.n_exp),
            ));
        }
        if self.m > self.l {
            return Err(Error::param(
                "M",
                format!("mutual inductance {} exceeds L = {}", self.m, self.l),
            ));
        }
        Ok(())
    }

    /// Applies one config entry. Returns `Ok(false)` if the key is not a
    /// device parameter.
    pub(crate) fn apply(&mut self, entry: &Entry) -> Result<bool> {
        let slot = match entry.key.as_str() {
            "R" => &mut self.r,
            "L" => &mut self.l,
            "M" => &mut self.m,
            "Ip" => &mut self.ip,
            "fq0" => &mut self.fq0,
            "fr1" => &mut self.fr1,
            "fr2" => &mut self.fr2,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "gamma12" => &mut self.gamma12,
            "Zinf" => &mut self.z_inf,
            "sigmaV1" => &mut self.sigma_v1,
            "sigmaV2" => &mut self.sigma_v2,
            "nExp" => {
                self.n_exp = entry.parse_u32()?;
                return Ok(true);
            }
            _ => return Ok(false),
        };
        *slot = entry.parse_f64()?;
        Ok(true)
    }

    /// Base values selected by an optional `preset` entry.
    pub(crate) fn base_from(entries: &[Entry]) -> Result<Self> {
        match entries.iter().find(|e| e.key == "preset") {
            None => Ok(Self::default()),
            Some(e) => Preset::from_name(&e.value)
                .map(Self::preset)
                .ok_or_else(|| Error::Config {
                    line: e.line,
                    message: format!("unknown preset `{}`", e.value),
                }),
        }
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let entries = config::parse(text)?;
        let mut params = Self::base_from(&entries)?;
        for entry in &entries {
            if entry.key == "preset" {
                continue;
            }
            if !params.apply(entry)? {
                return Err(entry.unknown());
            }
        }
        params.validate()?;
        Ok(params)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_config_str(&std::fs::read_to_string(path)?)
    }

    /// Serializes every field, one `key = value` line each, in schema order.
    pub fn to_config_string(&self) -> String {
        let values = [
            self.r,
            self.l,
            self.m,
            self.ip,
            self.fq0,
            self.fr1,
            self.fr2,
            self.g1,
            self.g2,
            self.gamma12,
            self.z_inf,
            self.sigma_v1,
            self.sigma_v2,
        ];
        let mut out = String::new();
        for (key, v) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{key} = {v:e}");
        }
        let _ = writeln!(out, "nExp = {}", self.n_exp);
        out
    }
}
