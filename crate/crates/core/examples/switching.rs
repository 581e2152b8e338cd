// SPDX-License-Identifier: Apache-2.0

//! On/off switching ratio versus hot-reservoir temperature.
//!
//! cargo run --example switching

use heatvalve::{power_at, switching_curve, DeviceParams};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams::default();
    let t0 = 0.08;
    let temps = [0.09, 0.1, 0.15, 0.2, 0.25, 0.3];
    for (t1, r) in switching_curve(&p, &temps, t0, 0.0)? {
        println!("T1 {t1:.2} K  ratio {r:.6}");
    }
    // A parasitic channel flux-independent in magnitude flattens the contrast.
    let on = power_at(&p, 0.5, 0.3, t0)?;
    for scale in [0.1, 1.0, 10.0] {
        let (_, r) = switching_curve(&p, &[0.3], t0, scale * on)?[0];
        println!("background {scale:>4} × P_on  ratio {r:.4}");
    }
    Ok(())
}
