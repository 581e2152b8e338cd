// SPDX-License-Identifier: Apache-2.0

//! Fit a thermometer calibration to noisy synthetic data and convert a
//! voltage back to temperature.
//!
//! cargo run --example calibration

use heatvalve::calibration::{fit_calibration, voltage_to_temperature, CalibrationPoint};
use heatvalve::validate::{reference_curve, sample_curve};

fn main() -> heatvalve::Result<()> {
    let truth = reference_curve();
    let temps: Vec<f64> = (0..40).map(|i| 0.07 + 0.0075 * i as f64).collect();
    // Deterministic ±0.5% wobble in place of measurement noise.
    let pts: Vec<CalibrationPoint> = sample_curve(&truth, &temps)
        .into_iter()
        .enumerate()
        .map(|(i, pt)| CalibrationPoint {
            voltage: pt.voltage * (1.0 + 0.005 * ((i * 7 % 11) as f64 / 5.0 - 1.0)),
            ..pt
        })
        .collect();
    let curve = fit_calibration(&pts)?;
    println!(
        "log branch  a {:.5}  b {:.5}  c {:.4e}",
        curve.low.a, curve.low.b, curve.low.c
    );
    println!("cubic       {:?}", curve.high);
    println!(
        "break       {:.4e} V at {} K",
        curve.break_voltage, curve.break_temperature
    );
    println!("rms         {:.3} mK", curve.rms_residual * 1e3);
    let v = pts[10].voltage;
    println!("T({v:.4e} V) = {:.4} K", voltage_to_temperature(&curve, v)?);
    print!("{}", curve.to_text());
    Ok(())
}
