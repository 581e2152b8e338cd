// SPDX-License-Identifier: Apache-2.0

//! Invariant suite on the default device, then with a corrupted constant.
//!
//! cargo run --example validate

use heatvalve::{run_validation, DeviceParams, PhysConstants};

fn main() {
    let p = DeviceParams::default();
    print!("{}", run_validation(&p, &PhysConstants::SI));
    let broken = PhysConstants {
        k_b: PhysConstants::SI.k_b * 1.01,
        ..PhysConstants::SI
    };
    let report = run_validation(&p, &broken);
    print!("\nwith k_B off by 1%:\n{report}");
    println!("exit code {}", report.exit_code());
}
