//! `surfcoh`: lattices, sweeps, fits and oracle checks from the command line.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 too many degenerate samples,
//! 4 validation failure.

mod angle;
mod fit;
mod io;
mod lattice;
mod oracle;
mod sim;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use surfcoh_core::Error;

#[derive(Parser)]
#[command(name = "surfcoh", version, about = "Surface codes on planar graphs under coherent Z-rotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, inspect and dualize codes.
    #[command(subcommand)]
    Lattice(lattice::LatticeCmd),
    /// Monte Carlo sweeps over sizes and angles.
    #[command(subcommand)]
    Sim(sim::SimCmd),
    /// Finite-size scaling fit of a results CSV.
    Fit(fit::FitArgs),
    /// Per-sample final-state records at one point.
    Dist(sim::DistArgs),
    /// Compare the FLO pipeline with the state-vector oracle on a small code.
    Oracle(oracle::OracleArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Degenerate(_) | Error::ImpossiblePostselection(_)) => 3,
        Some(Error::Validation(_) | Error::Construction(_)) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Lattice(c) => lattice::run(c),
        Command::Sim(c) => sim::run(c),
        Command::Fit(a) => fit::run(a),
        Command::Dist(a) => sim::dist(a),
        Command::Oracle(a) => oracle::run(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
