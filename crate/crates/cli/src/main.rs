//! Batch front-end: run any verification, emit machine-readable reports and
//! plot-ready data files.
//!
//! Reports are written to the output directory under a content hash of the
//! run configuration, so identical runs are byte-identical and re-runs never
//! overwrite existing results; timestamps live in a sidecar `.meta.json`.

mod commands;
mod runs;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "spinlab", version, about = "spin-curve numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a theta function (and derivatives) for a curve's period matrix
    Theta(commands::ThetaArgs),
    /// Period matrix of a marked hyperelliptic curve
    Periods(commands::PeriodsArgs),
    /// Odd spinor differential: coefficients, zeros, homological coordinates
    Spinor(commands::SpinorArgs),
    /// Pairing identity defect for a spinor square
    Rbr(commands::RbrArgs),
    /// Homogeneity exponent of tau from the scaling path
    TauScale(commands::TauScaleArgs),
    /// Degenerating family runs with exponent fits
    Degenerate(commands::DegenerateArgs),
    /// Exact divisor classes in the rational Picard basis
    Picard(commands::PicardArgs),
    /// Run the acceptance suite
    VerifyAll(commands::VerifyAllArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Theta(a) => commands::run_theta(a),
        Command::Periods(a) => commands::run_periods(a),
        Command::Spinor(a) => commands::run_spinor(a),
        Command::Rbr(a) => commands::run_rbr(a),
        Command::TauScale(a) => commands::run_tau_scale(a),
        Command::Degenerate(a) => commands::run_degenerate(a),
        Command::Picard(a) => commands::run_picard(a),
        Command::VerifyAll(a) => commands::run_verify_all(a),
    };
    std::process::exit(match code {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    });
}
