//! Command-line driver for the built-in studies, user configs and the
//! property suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use athermal_markov::experiments::{
    builtin, run, run_property_suite, write_outputs, write_property_reports, ExperimentConfig, ExperimentOutput,
    PROPERTY_SEED,
};
use athermal_markov::Error;
use clap::{Args, Parser, Subcommand};

/// Exit code for a run whose checks deviate from the expected behaviour.
const EXIT_DEVIATION: u8 = 1;
/// Exit code for config, usage and I/O errors.
const EXIT_USAGE: u8 = 2;
/// Exit code for numerical failures inside a run.
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "athermal-markov", version, about = "Non-Markovianity of perturbed thermal operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement study (log-negativity against T for several ε).
    Fig2(RunArgs),
    /// Total-correlation study (mutual information and discord against T).
    Fig3(RunArgs),
    /// Distance to the nearest Markovian thermal operation.
    Distance(RunArgs),
    /// Randomized property sweeps and first-order slope tests.
    Properties(PropertyArgs),
    /// Runs a JSON config.
    Run {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Prints a built-in config (fig2, fig3 or distance) as JSON.
    Template { name: String },
    /// Parses and validates a JSON config without running it.
    Validate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Output directory.
    #[arg(long, default_value = "./out")]
    out: PathBuf,
    /// Config override, repeatable (e.g. `epsilons=[0.05]`).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Optimizer grid points per dimension.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Optimizer function tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Seed of the optimizer's random start batch.
    #[arg(long = "seed-list", value_name = "ID")]
    seed_list: Option<u64>,
    /// Skip the SVG plots.
    #[arg(long)]
    no_svg: bool,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct PropertyArgs {
    #[arg(long, default_value = "./out")]
    out: PathBuf,
    /// Seed of the randomized sweeps.
    #[arg(long, default_value_t = PROPERTY_SEED)]
    seed: u64,
    #[arg(long, short)]
    verbose: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. } | Error::Io(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ATHERMAL_MARKOV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("ATHERMAL_MARKOV_THREADS: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("ATHERMAL_MARKOV_THREADS: {e}")))
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    if !path.exists() {
        return Err(usage(format!("--config: no such file `{}`", path.display())));
    }
    ExperimentConfig::load(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn apply_overrides(config: &ExperimentConfig, args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut sets = args.set.clone();
    if let Some(g) = args.grid {
        sets.push(format!("optimizer.grid_resolution={g}"));
    }
    if let Some(t) = args.tol {
        sets.push(format!("optimizer.ftol={t:e}"));
    }
    if let Some(s) = args.seed_list {
        sets.push(format!("optimizer.seed_sequence={s}"));
    }
    let c = config.with_overrides(&sets)?;
    c.validate()?;
    Ok(c)
}

fn report(out: &ExperimentOutput, files: &[PathBuf], verbose: bool) {
    if verbose {
        for r in &out.rows {
            eprintln!(
                "{:<20} ε={:<6} T={:<8.4} base={:+.6e} perturbed={:+.6e} Δ={:+.6e}",
                r.measure.to_string(),
                r.epsilon,
                r.temperature,
                r.unperturbed,
                r.perturbed,
                r.delta
            );
        }
        for n in &out.metadata.notes {
            eprintln!("note: {n}");
        }
    }
    for c in &out.checks {
        println!("[{}] {:<45} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{} rows in {:.2} s", out.rows.len(), out.metadata.runtime_seconds);
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn run_experiment(config: ExperimentConfig, args: &RunArgs) -> Result<u8, Failure> {
    let config = apply_overrides(&config, args)?;
    let out = run(&config)?;
    let files = write_outputs(&out, &args.out, !args.no_svg)?;
    report(&out, &files, args.verbose);
    Ok(if out.passed() { 0 } else { EXIT_DEVIATION })
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Fig2(a) => run_experiment(builtin("fig2").expect("built-in"), &a),
        Command::Fig3(a) => run_experiment(builtin("fig3").expect("built-in"), &a),
        Command::Distance(a) => run_experiment(builtin("distance").expect("built-in"), &a),
        Command::Run { config, args } => run_experiment(load(&config)?, &args),
        Command::Template { name } => {
            let c = builtin(&name)
                .ok_or_else(|| usage(format!("template: unknown built-in `{name}` (fig2, fig3, distance)")))?;
            println!("{}", c.to_json());
            Ok(0)
        }
        Command::Validate { config, set } => {
            let c = load(&config)?.with_overrides(&set)?;
            let s = c.validate()?;
            let (ds, db) = s.dims();
            println!("{}: system {ds} x bath {db} (joint {})", c.name, ds * db);
            println!("system energies {:?}", s.h_sys.energies());
            println!("bath energies {:?}", s.h_bath.energies());
            println!("α {:?}", c.unitary.all_phases());
            println!(
                "temperatures {} in [{}, {}]",
                s.temperatures.len(),
                s.temperatures[0],
                s.temperatures[s.temperatures.len() - 1]
            );
            println!("ε {:?}", s.epsilons);
            println!("measures {:?}", c.measures.iter().map(|m| m.to_string()).collect::<Vec<_>>());
            println!("energy preserving: {}", s.unitary.energy_preserving());
            Ok(0)
        }
        Command::Properties(a) => {
            let reports = run_property_suite(a.seed)?;
            let file = write_property_reports(&reports, &a.out)?;
            for r in &reports {
                println!("[{}] {:<35} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                if a.verbose {
                    eprintln!(
                        "  trials {} failures {} worst {:e} threshold {:e}",
                        r.trials, r.failures, r.worst, r.threshold
                    );
                }
            }
            println!("wrote {}", file.display());
            Ok(if reports.iter().all(|r| r.passed) { 0 } else { EXIT_DEVIATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
