use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gconc_cli::commands::{self, BoundArgs, ClusterArgs, CurveArgs, DistanceArgs};
use gconc_cli::verify::{self, VerifyArgs};
use gconc_cli::{exit, Outcome};

/// Certified lower bounds on the G-concurrence of bipartite states.
///
/// Exit status: 0 success (for `bound`, full Schmidt rank certified), 1 verification
/// failure, 2 input or usage error, 3 inconclusive bound.
#[derive(Parser)]
#[command(name = "gconc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower-bound the G-concurrence of a state file.
    Bound(BoundArgs),
    /// Axisymmetric and pure-state curves as CSV.
    Curve(CurveArgs),
    /// White-noise thresholds for linear cluster states.
    Cluster(ClusterArgs),
    /// Distance lower bound to the states of bounded Schmidt number.
    Distance(DistanceArgs),
    /// Run an oracle cross-check suite.
    Verify(VerifyArgs),
}

fn configure_threads() {
    let Ok(value) = std::env::var("GCONC_THREADS") else { return };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("ignoring GCONC_THREADS={value:?}: expected a positive integer"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Bound(args) => commands::bound(args),
        Command::Curve(args) => commands::curve(args),
        Command::Cluster(args) => commands::cluster(args),
        Command::Distance(args) => commands::distance(args),
        Command::Verify(args) => Ok(verify::run(args)),
    };
    match result {
        Ok(Outcome { output, exit }) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(exit::INPUT_ERROR);
            }
            ExitCode::from(exit)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
