// SPDX-License-Identifier: Apache-2.0

//! Eigenenergies across the avoided crossing with the fundamental mode.
//!
//! cargo run --example spectrum

use heatvalve::constants::H;
use heatvalve::spectrum::flux_for_frequency;
use heatvalve::{eigensystem, DeviceParams};

fn main() -> heatvalve::Result<()> {
    let p = DeviceParams::default();
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "flux", "f_q GHz", "E1 GHz", "E2 GHz", "E3 GHz"
    );
    for i in 0..=20 {
        let flux = 0.44 + 0.003 * i as f64;
        let eig = eigensystem(&p, flux)?;
        let e = eig.energies.map(|x| x / H / 1e9);
        println!(
            "{flux:>8.3} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            eig.fq / 1e9,
            e[1],
            e[2],
            e[3]
        );
    }

    let crossing = flux_for_frequency(&p, p.fr1).expect("fr above fq0");
    let eig = eigensystem(&p, crossing)?;
    let gap = (eig.energies[3] - eig.energies[2]) / H;
    println!(
        "crossing at flux {crossing:.6}: gap {:.4} GHz (2√2·g = {:.4} GHz)",
        gap / 1e9,
        2.0 * 2f64.sqrt() * p.g1 / 1e9
    );
    Ok(())
}
