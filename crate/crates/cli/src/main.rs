//! `l1equiv`: command-line front end for the verification library.
//!
//! Exit codes: 0 success or pass, 1 fail verdict, 2 parse, validation or
//! precondition error, 3 diverged simulation, 4 critical-gain bracket
//! failure.

mod commands;
mod failure;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "l1equiv", version, about = "Check L1 adaptive control against its PI equivalent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Output file, replaced atomically.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Adaptive,
    Frozen,
    Scripted,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one architecture and write the trace as CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// l1ac, pi or perturbed-pi.
        #[arg(long, default_value = "l1ac")]
        arch: String,
    },
    /// Co-simulate the L1-AC and the perturbed PI and compare their controls.
    Equiv {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "adaptive")]
        estimator: EstimatorArg,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Compare det(sI - A0) with s·p_A + k·p_Am.
    Charpoly {
        #[command(flatten)]
        common: Common,
        /// Overrides the filter gain of the scenario.
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Bisect for the critical PI gain.
    Kc {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        k_lo: f64,
        #[arg(long, default_value_t = 1e3)]
        k_hi: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// L∞-induced norm of the perturbation operator; passes when below 1.
    L1norm {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        quad_dt: f64,
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
    },
    /// Chart L1-AC verdicts over a (k, gamma) grid next to the PI verdicts.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Gain grid as start:stop:points.
        #[arg(long)]
        k: String,
        /// Adaptation-rate grid as start:stop:points.
        #[arg(long)]
        gamma: String,
        /// Run grid points one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Stable-manifold fragility demonstration.
    Fragility {
        /// Optional file with an [integrator] section.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { common, arch } => commands::simulate(&common.config, &common.out, &arch),
        Command::Equiv { common, estimator, tolerance } => {
            let est = match estimator {
                EstimatorArg::Adaptive => commands::EstimatorChoice::Adaptive,
                EstimatorArg::Frozen => commands::EstimatorChoice::Frozen,
                EstimatorArg::Scripted => commands::EstimatorChoice::Scripted,
            };
            commands::equiv(&common.config, &common.out, est, tolerance)
        }
        Command::Charpoly { common, k, tolerance } => {
            commands::charpoly(&common.config, &common.out, k, tolerance)
        }
        Command::Kc { common, k_lo, k_hi, tol } => {
            commands::kc(&common.config, &common.out, k_lo, k_hi, tol)
        }
        Command::L1norm { common, quad_dt, horizon } => {
            commands::l1norm(&common.config, &common.out, quad_dt, horizon)
        }
        Command::Sweep { common, k, gamma, sequential } => {
            commands::sweep(&common.config, &common.out, &k, &gamma, sequential)
        }
        Command::Fragility { config, out, epsilon } => {
            commands::fragility(config.as_deref(), &out, epsilon)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
