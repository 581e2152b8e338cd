// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heatvalve::commands::{self, RunConfig};
use heatvalve::{Error, SweepConfig, T2Mode};

#[derive(Parser)]
#[command(name = "heatvalve", version, about = "Qubit heat-valve simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Range {
    #[arg(long, default_value_t = 0.3)]
    flux_start: f64,
    #[arg(long, default_value_t = 0.7)]
    flux_stop: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fixed,
    Selfconsistent,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenenergies versus flux.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
    /// Transported power versus flux, with peak annotations.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 0.3)]
        t1: f64,
        #[arg(long, default_value_t = 0.08)]
        t0: f64,
        /// Reservoir 2 temperature in fixed mode; defaults to T0.
        #[arg(long)]
        t2: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Fixed)]
        mode: Mode,
    },
    /// Central-peak power against the bare-resistor estimate.
    Peak {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.3)]
        t1: f64,
        #[arg(long, default_value_t = 0.08)]
        t0: f64,
    },
    /// Fit a thermometer calibration and optionally convert voltages.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Two-column voltage, temperature file.
        points: PathBuf,
        /// One voltage per line to convert with the fitted curve.
        #[arg(long)]
        voltages: Option<PathBuf>,
        /// Destination of the converted table; standard output when omitted.
        #[arg(long)]
        converted_out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn print_unless_written(out: &Option<PathBuf>, text: &str) {
    if out.is_none() {
        print!("{text}");
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Spectrum { common, range } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let text = commands::cmd_spectrum(
                &cfg,
                range.flux_start,
                range.flux_stop,
                range.points,
                common.out.as_deref(),
            )?;
            print_unless_written(&common.out, &text);
        }
        Command::Sweep {
            common,
            range,
            t1,
            t0,
            t2,
            mode,
        } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let sweep = SweepConfig {
                flux_start: range.flux_start,
                flux_stop: range.flux_stop,
                points: range.points,
                t1,
                t0,
                t2: t2.unwrap_or(t0),
                mode: match mode {
                    Mode::Fixed => T2Mode::Fixed,
                    Mode::Selfconsistent => T2Mode::SelfConsistent,
                },
                background_power: cfg.background_power,
                ..SweepConfig::default()
            };
            let out = commands::cmd_sweep(&cfg, &sweep, common.out.as_deref())?;
            match &common.out {
                None => print!("{}", out.csv),
                Some(_) => print!("{}", out.result.peak_summary()),
            }
        }
        Command::Peak { common, t1, t0 } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let report = commands::cmd_peak(&cfg, t1, t0)?.to_string();
            if let Some(p) = &common.out {
                std::fs::write(p, &report)?;
            }
            print!("{report}");
        }
        Command::Calibrate {
            common,
            points,
            voltages,
            converted_out,
        } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let out = commands::cmd_calibrate(
                &cfg,
                &points,
                voltages.as_deref(),
                common.out.as_deref(),
                converted_out.as_deref(),
            )?;
            print_unless_written(&common.out, &out.curve_text);
            if let Some(table) = &out.converted {
                print_unless_written(&converted_out, table);
            }
        }
        Command::Validate { config } => {
            let cfg = RunConfig::load(config.as_deref())?;
            let report = commands::cmd_validate(&cfg);
            print!("{report}");
            return Ok(report.exit_code() as u8);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
