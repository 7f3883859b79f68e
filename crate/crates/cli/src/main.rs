mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use depnet::CopulaSpec;

use crate::config::{ConfigFile, Overrides, RunConfig};
use crate::error::CliError;

/// Equilibrium and transient analysis of copula-dependent epidemics on graphs.
#[derive(Debug, Parser)]
#[command(name = "depnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Edge-list path or one of star:N, regular:N,D,SEED, er:N,P,SEED, plaw:N,M,EXP,SEED.
    #[arg(long, global = true, value_name = "SPEC")]
    graph: Option<String>,
    /// Pull-attack probability.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Cure probability.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Per-edge push-attack probability.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Copula joining the push and pull events, FAMILY[:PARAM]. Repeat for sweep.
    #[arg(long, global = true, value_name = "COPULA")]
    outer: Vec<CopulaSpec>,
    /// Copula joining the neighbor push events, FAMILY[:PARAM]. Repeat for sweep.
    #[arg(long, global = true, value_name = "COPULA")]
    node: Vec<CopulaSpec>,
    /// Solver tolerance on the max-norm update.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Number of simulation steps.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Output path prefix; without it the main table goes to stdout.
    #[arg(long, global = true, value_name = "PREFIX")]
    out: Option<PathBuf>,
    /// Seed for generated graphs, replacing the one in the graph spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write numbers with 17 significant digits.
    #[arg(long, global = true)]
    full_precision: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral radius and degree summary of the graph (JSON).
    Spectral,
    /// Iterate the dynamics from an initial state.
    Simulate {
        /// Uniform initial probability, or a CSV of per-node values.
        #[arg(long, value_name = "VALUE|PATH")]
        initial: Option<String>,
    },
    /// Solve for the equilibrium infection probabilities.
    Equilibrium,
    /// Equilibrium and long-run bounds per node.
    Bounds,
    /// Threshold conditions evaluated at the solved equilibrium (JSON).
    Threshold,
    /// Star equilibria over every (node, outer) copula pair.
    Sweep,
    /// Fit the bound-based approximation over a parameter grid.
    Approx {
        /// Use the full study grid instead of every other value per axis.
        #[arg(long)]
        full_grid: bool,
    },
    /// Reproduce a published star sweep.
    Repro {
        /// table1 or table2.
        table: String,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DEPNET_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("DEPNET_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot set up thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let c = cli.common;
    let file = match &c.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let initial = match &cli.command {
        Command::Simulate { initial } => initial.clone(),
        _ => None,
    };
    let overrides = Overrides {
        graph: c.graph,
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
        outer: c.outer,
        node: c.node,
        tol: c.tol,
        max_iter: c.max_iter,
        horizon: c.horizon,
        out: c.out,
        seed: c.seed,
        full_precision: c.full_precision,
        initial,
    };
    let cfg = RunConfig::merge(file, overrides)?;
    match cli.command {
        Command::Spectral => commands::spectral(&cfg),
        Command::Simulate { .. } => commands::simulate_cmd(&cfg),
        Command::Equilibrium => commands::equilibrium(&cfg),
        Command::Bounds => commands::bounds(&cfg),
        Command::Threshold => commands::threshold(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Approx { full_grid } => commands::approx(&cfg, full_grid),
        Command::Repro { table } => commands::repro(&cfg, &table),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors share exit code 1 with other input errors; 2 is
            // reserved for numerical non-convergence.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
