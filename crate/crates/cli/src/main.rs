use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dirac_cli::{load_config, run_command, write_outputs, Command};

/// Verification suites and scenarios for the charge-symmetric Dirac theory.
#[derive(Debug, Parser)]
#[command(name = "dirac", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the CSV outputs.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for the random samples (overrides the config value).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("dirac: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let output = match run_command(cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("dirac {}: {e}", cli.command.name());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match write_outputs(&cli.out, &output) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("dirac: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if !cli.quiet {
        for line in &output.summary {
            println!("{line}");
        }
        for path in &written {
            println!("wrote {}", path.display());
        }
    }
    if output.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "dirac {}: failed checks: {}",
            cli.command.name(),
            output.failures.join(", ")
        );
        ExitCode::from(1)
    }
}
