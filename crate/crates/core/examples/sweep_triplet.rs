// SPDX-License-Identifier: Apache-2.0

//! Power into the cold reservoir versus flux, with the peak annotations.
//!
//! cargo run --release --example sweep_triplet

use heatvalve::spectrum::flux_for_frequency;
use heatvalve::{run_sweep, DeviceParams, PeakKind, SweepConfig};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams::default();
    let res = run_sweep(&p, &SweepConfig::default())?;
    for pk in &res.peaks {
        println!(
            "{:<20} flux {:.5}  {:8.3} fW  f_q {:6.2} GHz",
            format!("{:?}", pk.kind),
            pk.flux_frac,
            pk.height * 1e15,
            pk.fq / 1e9
        );
    }
    let hi = flux_for_frequency(&p, p.fr1).expect("fr above fq0");
    println!("f_q = f_r at flux {:.5} and {hi:.5}", 1.0 - hi);
    println!(
        "central {}, inner satellites {}",
        res.count(PeakKind::Central),
        res.count(PeakKind::InnerSatellite)
    );
    Ok(())
}
