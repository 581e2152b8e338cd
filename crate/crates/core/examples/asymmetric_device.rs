// SPDX-License-Identifier: Apache-2.0

//! Unequal resonators: the dark state couples in and the numeric eigensolver
//! takes over.
//!
//! cargo run --release --example asymmetric_device

use heatvalve::{evaluate_point, run_sweep, DeviceParams, SweepConfig};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams {
        fr2: 7.2e9,
        g2: 0.25e9,
        ..DeviceParams::default()
    };
    let pt = evaluate_point(&p, 0.46, 0.3, 0.08)?;
    println!("populations at 0.46: {:?}", pt.state.rho);
    let cfg = SweepConfig {
        points: 801,
        ..SweepConfig::default()
    };
    let res = run_sweep(&p, &cfg)?;
    for pk in &res.peaks {
        println!(
            "{:<20} flux {:.5}  {:.3} fW",
            format!("{:?}", pk.kind),
            pk.flux_frac,
            pk.height * 1e15
        );
    }
    Ok(())
}
