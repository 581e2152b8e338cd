// SPDX-License-Identifier: Apache-2.0

//! Cold-reservoir temperature solved from its electron-phonon balance.
//!
//! cargo run --release --example self_consistent

use heatvalve::sweep::balance_residual;
use heatvalve::{run_sweep, DeviceParams, SweepConfig, T2Mode};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams::default();
    let cfg = SweepConfig {
        flux_start: 0.4,
        flux_stop: 0.6,
        points: 41,
        mode: T2Mode::SelfConsistent,
        ..SweepConfig::default()
    };
    let res = run_sweep(&p, &cfg)?;
    for r in res.records.iter().step_by(4) {
        println!(
            "flux {:.3}  P {:9.4e} W  T2 {:.4} mK  residual {:.1e} W",
            r.flux_frac,
            r.power,
            (r.t2 - cfg.t0) * 1e3,
            balance_residual(&p, cfg.t0, r)
        );
    }
    Ok(())
}
