mod body;
mod config;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig, Task};
use error::CliError;

#[derive(Parser)]
#[command(name = "polyapprox", version, about = "Deviations between convex bodies and their polytope approximations", after_long_help = body::GRAMMAR)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed; without it POLYAPPROX_SEED is used, and failing that a fresh seed is drawn and printed
    #[arg(long, global = true, env = "POLYAPPROX_SEED")]
    seed: Option<u64>,
    /// Monte Carlo samples per estimate
    #[arg(long, global = true, default_value_t = 20_000)]
    samples: usize,
    /// Worker threads (results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV output, for disc-triangle and random-limit
    #[arg(long, global = true)]
    csv: bool,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    #[command(flatten)]
    Run(Task),
    /// Re-run the configuration stored in a file (a RunConfig or a JSON record embedding one)
    Replay { path: PathBuf },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    let text = match text.strip_prefix("# config: ") {
        Some(rest) => rest.lines().next().unwrap_or_default().to_string(),
        None => text,
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match start(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(record)) => {
            print!("{record}");
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn start(cli: Cli) -> Result<(), CliError> {
    let c = cli.common;
    if let Some(t) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    // a replayed configuration keeps its stored output path, but the text goes to stdout or --out
    let (cfg, dest) = match cli.command {
        Command::Replay { path } => (load_config(&path)?, c.out),
        Command::Run(task) => {
            let seed = c.seed.unwrap_or_else(|| {
                let s = polyapprox::rng::entropy_seed();
                eprintln!("seed: {s}");
                s
            });
            let cfg = RunConfig {
                task,
                samples: c.samples,
                seed,
                format: if c.csv { Format::Csv } else { Format::Json },
                out: c.out,
            };
            let dest = cfg.out.clone();
            (cfg, dest)
        }
    };
    let text = run::execute(&cfg)?;
    match dest {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
