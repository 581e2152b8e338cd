// SPDX-License-Identifier: Apache-2.0

//! Full-model central peak against the bare-resistor estimate.
//!
//! cargo run --example central_peak

use heatvalve::dynamics::{bare_resistor_power_with, optimal_inductance};
use heatvalve::{bare_resistor_max_power, bare_resistor_power, power_at, DeviceParams, Occupation};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams::default();
    let (t1, t2) = (0.3, 0.08);
    let full = power_at(&p, 0.5, t1, t2)?;
    let bare = bare_resistor_power(&p, t1, 0.5)?;
    let alt = bare_resistor_power_with(&p, t1, 0.5, Occupation::BosePlusOne)?;
    println!("full model        {:.3} fW", full * 1e15);
    println!(
        "bare resistor     {:.3} fW  (n+1 occupation: {:.3} fW)",
        bare * 1e15,
        alt * 1e15
    );
    println!("ratio             {:.3}", full / bare);

    let l_opt = optimal_inductance(&p, 0.5)?;
    let best = bare_resistor_max_power(&p, t1, 0.5)?;
    println!(
        "matched L = M     {:.3} nH gives {:.3} fW",
        l_opt * 1e9,
        best * 1e15
    );

    for t in [0.1, 0.15, 0.2, 0.25, 0.3, 0.35] {
        println!("T1 = {t:.2} K  P = {:.4e} W", power_at(&p, 0.5, t, t2)?);
    }
    Ok(())
}
