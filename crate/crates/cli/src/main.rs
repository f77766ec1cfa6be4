use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trustfusion_cli::commands::{execute, Command};
use trustfusion_cli::spec::parse_spec;
use trustfusion_cli::CliError;

/// Fusion-center detection experiments with trust observations and malicious robots.
#[derive(Debug, Parser)]
#[command(name = "trustfusion", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// One experiment at the scenario's malicious count.
    Run(Common),
    /// Experiments over the [sweep] proportions.
    Sweep(Common),
    /// Critical malicious proportion, exact and normal approximation.
    Mstar(Common),
    /// Exact worst-case error of the two-stage detector against its Chernoff bound.
    Bounds(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Spec file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Overrides scenario.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides scenario.trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cmd: Command, args: Common) -> Result<(), CliError> {
    let mut spec = parse_spec(&args.spec)?;
    if let Some(seed) = args.seed {
        spec.file.scenario.seed = seed;
        spec.scenario.seed = seed;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(CliError::Invalid {
                field: "--trials".into(),
                message: "must be at least 1".into(),
            });
        }
        spec.file.scenario.trials = trials;
    }
    if let Some(out) = args.out {
        spec.file.output.dir = out;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Output {
            context: "starting worker threads".into(),
            source: std::io::Error::other(e),
        })?;
    let outcome = pool.install(|| execute(cmd, &spec))?;
    for f in &outcome.files {
        eprintln!("wrote {}", outcome.dir.join(f).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Sub::Run(a) => (Command::Run, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Mstar(a) => (Command::Mstar, a),
        Sub::Bounds(a) => (Command::Bounds, a),
    };
    match run(cmd, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
