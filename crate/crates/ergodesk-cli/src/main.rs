use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ergodesk_cli::run::{self, parse_format, Format, Sink};
use ergodesk_cli::{config, parse, CliError};

/// Workbench for averaging experiments on finite models of sigma-finite
/// measure spaces: norm evaluation, operator verification, ergodic average
/// traces with convergence certificates, and seeded property sweeps.
#[derive(Parser)]
#[command(name = "ergodesk", version, arg_required_else_help = true)]
struct Cli {
    /// Run an experiment described by a JSON config file instead of a
    /// subcommand.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// RNG seed; echoed into every output.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file, written atomically; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// csv or json; each command has a natural default.
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<String>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate symmetric norms of a function document.
    Norms {
        /// Function JSON: {"weights": [...], "tail": bool, "values": [...]}.
        #[arg(long = "fn", value_name = "PATH")]
        function: PathBuf,
        /// Comma-separated specs, e.g. "l1,linf,lorentz:sqrt,orlicz:p=2".
        #[arg(long)]
        spec: String,
    },
    /// Operator checks.
    Op {
        #[command(subcommand)]
        action: OpCommand,
    },
    /// Averaging runs.
    Avg {
        #[command(subcommand)]
        action: AvgCommand,
    },
    /// Seeded maximal-inequality sweep; exits 1 on any violation.
    #[command(name = "weak11-suite")]
    Weak11Suite {
        #[arg(long, default_value_t = 500)]
        instances: u64,
        /// Truncation horizon of the maximal function.
        #[arg(long, default_value_t = 200)]
        horizon: usize,
        #[arg(long = "max-atoms", default_value_t = 32)]
        max_atoms: usize,
        /// Check the Besicovitch-weighted inequality instead of the plain one.
        #[arg(long)]
        weighted: bool,
    },
    /// Frequency sweeps along one orbit.
    Ww {
        #[command(subcommand)]
        action: WwCommand,
    },
    /// Bilinear return-times averages along two independent orbits.
    #[command(name = "return-times")]
    ReturnTimes {
        #[arg(long = "system-a", value_name = "SPEC")]
        system_a: String,
        /// Function on system a: "chi:<i>", "const:<c>", or a JSON path.
        #[arg(long = "fn-a", value_name = "FN")]
        fn_a: String,
        /// Base point index in system a.
        #[arg(long, default_value_t = 0)]
        omega: usize,
        #[arg(long = "system-b", value_name = "SPEC")]
        system_b: String,
        #[arg(long = "fn-b", value_name = "FN")]
        fn_b: String,
        /// Base point index in system b.
        #[arg(long, default_value_t = 0)]
        x: usize,
        /// Report indices, e.g. "12,24,1200".
        #[arg(long)]
        n: String,
    },
    /// The slowly decaying profile that escapes every Lp space.
    #[command(name = "slow-decay")]
    SlowDecay {
        #[arg(long, default_value_t = 30)]
        depth: u32,
        /// Right edge of the sampled domain.
        #[arg(long = "omega-max", default_value_t = 1e6)]
        omega_max: f64,
        /// Logarithmic grid resolution.
        #[arg(long, default_value_t = 601)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum OpCommand {
    /// Check both contraction bounds and report every margin; exits 1 when
    /// the operator is not a contraction pair.
    Verify {
        /// Operator JSON: {"K": [[...]], "b": [...], "eta": ...}.
        #[arg(long, value_name = "PATH")]
        op: PathBuf,
        /// Space JSON: {"weights": [...], "tail": bool}.
        #[arg(long, value_name = "PATH")]
        space: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum AvgCommand {
    /// Trace Cesaro or Besicovitch-weighted averages at chosen indices.
    Run {
        #[arg(long, value_name = "PATH")]
        op: PathBuf,
        #[arg(long = "fn", value_name = "PATH")]
        function: PathBuf,
        /// Weight spec like "trig:z=1,lambda=i;pert:harmonic:0.5"; Cesaro
        /// averages when omitted.
        #[arg(long, value_name = "SPEC")]
        weights: Option<String>,
        /// Report indices, e.g. "1,10,100,1000".
        #[arg(long)]
        n: String,
        /// Measure budget and tolerance for an almost-uniform convergence
        /// certificate; exits 1 when certification fails.
        #[arg(long, num_args = 2, value_names = ["EPS", "TOL"])]
        egorov: Option<Vec<f64>>,
    },
}

#[derive(Subcommand)]
enum WwCommand {
    /// Average one function against a grid of unimodular frequencies and
    /// report the late-window oscillation per frequency.
    Sweep {
        /// "cyclic:N=<len>,r=<step>", "shift:lo=<a>,hi=<b>", or
        /// "product:[...]x[...]".
        #[arg(long, value_name = "SPEC")]
        system: String,
        /// Function on the system: "chi:<i>", "const:<c>", or a JSON path.
        #[arg(long = "fn", value_name = "FN")]
        function: String,
        /// Base point index.
        #[arg(long, default_value_t = 0)]
        omega: usize,
        /// Number of equally spaced frequencies on the unit circle.
        #[arg(long = "lambda-grid", default_value_t = 64)]
        lambda_grid: usize,
        /// Report indices, e.g. "100,1000,10000".
        #[arg(long)]
        n: String,
    },
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    let format = cli.format.as_deref().map(parse_format).transpose()?;
    let seed = cli.seed;
    let out = cli.out;
    match (cli.config, cli.command) {
        (Some(_), Some(_)) => {
            Err(CliError::Parse("give either --config or a subcommand, not both".into()))
        }
        (None, None) => {
            Err(CliError::Parse("nothing to do: give a subcommand or --config".into()))
        }
        (Some(path), None) => config::run_config_file(&path, seed, out, format),
        (None, Some(command)) => {
            let sink = |default: Format| Sink { path: out.clone(), format: format.unwrap_or(default) };
            match command {
                Command::Norms { function, spec } => {
                    run::run_norms(&function, &spec, &sink(Format::Json), seed)
                }
                Command::Op { action: OpCommand::Verify { op, space, tol } } => {
                    run::run_op_verify(&op, &space, tol, &sink(Format::Json), seed)
                }
                Command::Avg { action: AvgCommand::Run { op, function, weights, n, egorov } } => {
                    let indices = parse::parse_indices(&n)?;
                    let egorov = egorov.map(|pair| (pair[0], pair[1]));
                    run::run_avg(
                        &op,
                        &function,
                        weights.as_deref(),
                        &indices,
                        egorov,
                        &sink(Format::Csv),
                        seed,
                    )
                }
                Command::Weak11Suite { instances, horizon, max_atoms, weighted } => {
                    run::run_weak11_suite(
                        instances,
                        horizon,
                        max_atoms,
                        weighted,
                        seed.unwrap_or(0),
                        &sink(Format::Json),
                    )
                }
                Command::Ww {
                    action: WwCommand::Sweep { system, function, omega, lambda_grid, n },
                } => {
                    let indices = parse::parse_indices(&n)?;
                    run::run_ww_sweep(
                        &system,
                        &function,
                        omega,
                        lambda_grid,
                        &indices,
                        &sink(Format::Csv),
                        seed,
                    )
                }
                Command::ReturnTimes { system_a, fn_a, omega, system_b, fn_b, x, n } => {
                    let indices = parse::parse_indices(&n)?;
                    run::run_return_times(
                        &system_a,
                        &fn_a,
                        omega,
                        &system_b,
                        &fn_b,
                        x,
                        &indices,
                        &sink(Format::Csv),
                        seed,
                    )
                }
                Command::SlowDecay { depth, omega_max, points } => {
                    run::run_slow_decay(depth, omega_max, points, &sink(Format::Csv), seed)
                }
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => {}
        Ok(false) => {
            eprintln!("one or more checked properties failed; see the report");
            std::process::exit(1);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
