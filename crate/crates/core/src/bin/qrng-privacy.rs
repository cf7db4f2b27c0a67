use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qrng_privacy::report::{
    analyze, ellipse_csv, run_verification, sweep_csv, tomography, CliResult, Failure,
    FailureKind, Formulas,
};

const EXIT_CODES: &str = "Exit codes:
  0  success
  1  verification failure
  2  parse or usage error
  3  non-physical input (state not normalized, invalid density matrix)
  4  precondition violated (e.g. user direction not perpendicular to the Bloch vector)";

/// Information an eavesdropper holding the purifying qubit can extract from a
/// two-qubit QRNG.
#[derive(Parser)]
#[command(name = "qrng-privacy", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full privacy report for a pure state file {"amplitudes":[[re,im],x4]}.
    Analyze {
        file: PathBuf,
        /// User measurement direction x,y,z (default: Schmidt-frame +x).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
    },
    /// Bounds from a tomographed user density matrix {"rho":[[[re,im],..],..]}.
    Tomography { file: PathBuf },
    /// CSV of C, purity, i_max, holevo, jrw over a concurrence range.
    Sweep {
        c_min: f64,
        c_max: f64,
        steps: usize,
        /// Angle between two randomly chosen user directions; adds i_max_random.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// CSV of the mutual information along the constraint ellipse.
    Ellipse {
        concurrence: f64,
        n_points: usize,
    },
    /// Run the property suites on random states.
    Verify {
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        states: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::new(FailureKind::Usage, format!("cannot read {}: {e}", path.display()))
    })
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Analyze { file, direction } => {
            Ok(analyze(&read(&file)?, direction.as_deref())?.to_json())
        }
        Command::Tomography { file } => Ok(tomography(&read(&file)?)?.to_json()),
        Command::Sweep {
            c_min,
            c_max,
            steps,
            gamma,
        } => sweep_csv(c_min, c_max, steps, gamma),
        Command::Ellipse {
            concurrence,
            n_points,
        } => ellipse_csv(concurrence, n_points),
        Command::Verify {
            seed,
            states,
            inject_fault,
        } => {
            let formulas = if inject_fault {
                Formulas::corrupted()
            } else {
                Formulas::default()
            };
            let summary = run_verification(seed, states, &formulas);
            let table = summary.render();
            if summary.passed() {
                Ok(table)
            } else {
                print!("{table}");
                Err(Failure::new(FailureKind::Verification, "verification failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
