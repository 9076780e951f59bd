//! `delay-sync`: synchronization stability of delay-coupled oscillator
//! networks from the command line.
//!
//! Every subcommand reads one TOML experiment config and writes CSV files
//! into an output directory. Identical configs produce byte-identical
//! outputs, independent of the thread count.
//!
//! Exit codes: 0 success, 2 invalid config or input, 3 precondition
//! violation (the requested analysis does not apply to the configured
//! system), 4 numerical failure.

// Guards are written `!(x > 0.0)` rather than `x <= 0.0` so that NaN fails
// validation instead of slipping past it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use delay_sync_core::{par, Error, Result};

use commands::Ctx;

/// Environment variable holding the default worker-thread count used when
/// `--threads` is absent. `0` means "use all cores".
pub const THREADS_ENV: &str = "DELAY_SYNC_THREADS";

#[derive(Parser)]
#[command(
    name = "delay-sync",
    version,
    about = "Synchronization stability of delay-coupled oscillator networks",
    long_about = "Synchronization stability of delay-coupled oscillator networks.\n\
                  Each subcommand reads a TOML experiment config and writes CSV \
                  data files; reruns with the same config are byte-identical.\n\
                  Exit codes: 0 success, 2 invalid config, 3 precondition \
                  violation, 4 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical coupling and synchronization window of the equilibrium regime
    Window(CommonArgs),
    /// Branch curves and exact characteristic roots per transverse block
    Spectrum(CommonArgs),
    /// Integrate the network directly; trajectory, sync error, and decay fit
    Simulate(CommonArgs),
    /// Stability of the Stuart-Landau limit cycle over a sigma x tau grid
    Map(CommonArgs),
    /// Critical-coupling scaling over random-graph ensembles
    Scaling(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration file (TOML)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Worker threads for parallel sweeps (0 = all cores); defaults to
    /// $DELAY_SYNC_THREADS, else 0
    #[arg(long, value_name = "K")]
    threads: Option<usize>,

    /// Output directory, created if missing; overrides the config's
    /// run.output (default "out")
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Keep every S-th stored sample in trajectory.csv (simulate only)
    #[arg(long, value_name = "S", default_value_t = 1)]
    stride: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidInput(_) => 2u8,
                Error::Precondition(_) => 3,
                Error::Numerical(_) => 4,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let (args, runner): (&CommonArgs, fn(&Ctx) -> Result<()>) = match &cli.command {
        Command::Window(a) => (a, commands::window::run),
        Command::Spectrum(a) => (a, commands::spectrum::run),
        Command::Simulate(a) => (a, commands::simulate::run),
        Command::Map(a) => (a, commands::map::run),
        Command::Scaling(a) => (a, commands::scaling::run),
    };
    if args.stride == 0 {
        return Err(Error::invalid("--stride must be at least 1"));
    }
    let threads = resolve_threads(args.threads)?;
    let (cfg, base) = config::load_config(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.run.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).map_err(|e| {
        Error::invalid(format!(
            "cannot create output directory {}: {e}",
            out.display()
        ))
    })?;
    let ctx = Ctx {
        cfg: &cfg,
        base: &base,
        out: &out,
        stride: args.stride,
    };
    par::with_threads(threads, || runner(&ctx))
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(k) = flag {
        return Ok(k);
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Error::invalid(format!(
                "{THREADS_ENV} must be a nonnegative integer, got {s:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Error::invalid(format!("{THREADS_ENV}: {e}"))),
    }
}
