mod commands;
mod ranges;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mqcbound_core::Error;

use table::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(Error::Domain(_) | Error::Unsupported(_) | Error::ResourceGuard { .. }) => 1,
            CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
        }
    }
}

/// Bounds on observable multiple-quantum coherence intensities of
/// polarised spin-1/2 ensembles.
#[derive(Debug, Parser)]
#[command(name = "mqcbound", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format; tables default to csv, `verify` to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomised check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper and lower intensity bounds over an (N, p, q) grid.
    Bounds(commands::BoundsArgs),
    /// Half-decay orders of both bounds and the width between them.
    Transition(commands::TransitionArgs),
    /// Bounds at q = N and q = N - 1 as a function of N.
    Figure2(commands::Figure2Args),
    /// Gaussian-smeared box model of the coherence-order profile.
    Profile(commands::ProfileArgs),
    /// Maximal rank of coherence-order-q operators.
    Rank(commands::RankArgs),
    /// Signal-to-noise needed to observe order q.
    Snr(commands::SnrArgs),
    /// Dense small-N verification suite.
    Verify(commands::VerifyArgs),
}

fn command_line() -> String {
    let mut args = std::env::args();
    args.next();
    std::iter::once("mqcbound".to_string()).chain(args).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(threads) = cli.common.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    let (output, default_format) = match &cli.command {
        Command::Bounds(a) => (commands::bounds(a)?, Format::Csv),
        Command::Transition(a) => (commands::transition(a)?, Format::Csv),
        Command::Figure2(a) => (commands::figure2(a)?, Format::Csv),
        Command::Profile(a) => (commands::profile(a)?, Format::Csv),
        Command::Rank(a) => (commands::rank(a)?, Format::Csv),
        Command::Snr(a) => (commands::snr(a)?, Format::Csv),
        Command::Verify(a) => (commands::verify(a, cli.common.seed)?, Format::Json),
    };
    let format = cli.common.format.unwrap_or(default_format);
    let line = command_line();
    let meta = table::Meta {
        command_line: &line,
        seed: cli.common.seed,
        extra: output.meta,
    };
    let mut sink: Box<dyn Write> = match &cli.common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    output.table.write(format, &meta, &mut sink)?;
    sink.flush()?;
    Ok(output.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("mqcbound: verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("mqcbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
