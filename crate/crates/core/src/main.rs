//! Command-line front end for the relay simulator.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fdrelay::config::{parse_sweep_flag, ConfigFile};
use fdrelay::harness::{design_position, run_sweep, run_trial, Scenario, SweepSpec};
use fdrelay::{Error, Result};

#[derive(Parser)]
#[command(name = "fdrelay", version, about = "Full-duplex UAV relay placement, beamforming and power control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relay placement of one trial.
    Position(Common),
    /// Per-iteration trace of the alternating loop for one trial, as CSV.
    Converge(Common),
    /// Mean rates over a swept parameter, as CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// NAME=v1,v2,... with NAME one of p_s_tot_dbm, p_v_tot_dbm, distance, array, delta_m_deg.
        #[arg(long)]
        sweep: String,
    },
    /// Full record of one trial, as JSON.
    Trial {
        #[command(flatten)]
        common: Common,
        /// Trial index.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn scenario(&self) -> Result<Scenario> {
        let mut file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if let Some(seed) = self.seed {
            file.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            file.trials = trials;
        }
        if let Some(workers) = self.workers {
            file.workers = workers;
        }
        file.to_scenario()
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(
                File::create(path).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
            ),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Serialize)]
struct ConvergeRow {
    iteration: usize,
    rate: f64,
    si_gain: f64,
    s2d_gain: f64,
    #[serde(rename = "p_s")]
    source_power: f64,
    #[serde(rename = "p_v")]
    relay_power: f64,
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("output failed: {e}"))
}

fn write_csv<T: Serialize>(out: Box<dyn Write>, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Position(common) => {
            let scenario = common.scenario()?;
            let r = design_position(&scenario, 0)?;
            let mut out = common.sink()?;
            let v = |p: fdrelay::channel::Vec3| format!("({:.6}, {:.6}, {:.6})", p.x, p.y, p.z);
            let text = format!(
                "dn: {}\nsplit: {:.9}\nclosed_form: {}\nposition: {}\nfallback: {}\napprox_bound_s2v: {:.6}\napprox_bound_v2d: {:.6}\n",
                v(r.dn),
                r.split,
                v(r.closed_form),
                v(r.position),
                r.fallback,
                r.approx_bounds.0,
                r.approx_bounds.1
            );
            out.write_all(text.as_bytes()).map_err(io_err)
        }
        Command::Converge(common) => {
            let trial = run_trial(&common.scenario()?, 0)?;
            let rows = trial.trace.iter().map(|r| ConvergeRow {
                iteration: r.iteration,
                rate: r.rate,
                si_gain: r.gains.g_si,
                s2d_gain: r.gains.g_s2d,
                source_power: r.powers.source,
                relay_power: r.powers.relay,
            });
            write_csv(common.sink()?, rows)
        }
        Command::Sweep { common, sweep } => {
            let (param, values) = parse_sweep_flag(&sweep)?;
            let spec = SweepSpec { param, values, base: common.scenario()? };
            let rows = run_sweep(&spec)?;
            if common.out.is_some() {
                for r in &rows {
                    println!(
                        "{}={} {:<13} {:.4} +/- {:.4} bps/Hz",
                        r.sweep_param, r.sweep_value, r.scheme, r.mean_rate_bps_hz, r.stderr
                    );
                }
            }
            write_csv(common.sink()?, rows)
        }
        Command::Trial { common, index } => {
            let trial = run_trial(&common.scenario()?, index)?;
            let mut out = common.sink()?;
            serde_json::to_writer_pretty(&mut out, &trial).map_err(io_err)?;
            out.write_all(b"\n").map_err(io_err)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
