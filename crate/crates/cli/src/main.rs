//! `hdmac`: region evaluation, frontier tracing, baseline comparison,
//! projection checks and exponent sweeps from one TOML config.

mod config;
mod error;
mod modes;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hdmac::Execution;

use config::{Format, Mode, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hdmac", version, about = "Half-duplex cooperative MAC rate regions")]
struct Args {
    /// Mode to run; defaults to `mode` in the config.
    mode: Option<Mode>,
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for the search grids.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the randomized checks in `fme-verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hdmac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let mode = match (args.mode, cfg.mode) {
        (Some(a), Some(c)) if a != c => {
            return Err(CliError::Config(format!("mode `{a}` on the command line, `{c}` in the config")));
        }
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) => return Err(CliError::Config("no mode given".into())),
    };
    cfg.validate(mode)?;
    let exec = configure_threads(args.threads)?;
    let format = args.format.or(cfg.output.format).unwrap_or_else(|| modes::default_format(mode));
    let out = args.out.clone().or_else(|| cfg.output.path.clone());

    let outcome = modes::run(mode, &cfg, format, &modes::Context { exec, seed: args.seed })?;
    match out {
        Some(path) => std::fs::write(&path, &outcome.artifact).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(&outcome.artifact)?,
    }
    eprintln!("{}", outcome.summary);
    outcome.verdict
}

fn configure_threads(threads: Option<usize>) -> Result<Execution, CliError> {
    match threads {
        None => Ok(Execution::default()),
        Some(0) => Err(CliError::Config("--threads must be positive".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            eprintln!("hdmac: built without the `parallel` feature; running sequentially");
            Ok(Execution::Sequential)
        }
    }
}
