//! `flowsmooth` — run and validate trajectory-smoothing experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use flowsmooth::{run_experiment, ExperimentConfig, RunError};

const USAGE: &str = "\
flowsmooth — trajectory-smoothing sampler experiments

USAGE:
  flowsmooth run --config <path> [--out <dir>] [--seed <u64>]
  flowsmooth validate --config <path>

SUBCOMMANDS:
  run        Execute the configured sampler/field sweep and write CSV
             reports (summary.csv, timings.csv, optional trajectory dumps)
  validate   Parse and check the config, then exit (0 = valid, 2 = not)

FLAGS:
  --config PATH   JSON experiment configuration (required)
  --out DIR       Output directory, overriding the config's output_dir
  --seed U64      Seed override for the run

ENVIRONMENT:
  FLOWSMOOTH_THREADS   Cap on concurrent ensemble members

EXIT CODES:
  0  success
  2  configuration error (bad flags, unparseable or invalid config)
  3  numeric failure in all runs
";

struct Args {
    command: Command,
    config_path: PathBuf,
    out_dir: Option<PathBuf>,
    seed: Option<u64>,
}

enum Command {
    Run,
    Validate,
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<Args, String> {
    let command = match argv.next().as_deref() {
        Some("run") => Command::Run,
        Some("validate") => Command::Validate,
        Some("--help") | Some("-h") | Some("help") => return Err(String::new()),
        Some(other) => return Err(format!("unknown subcommand \"{other}\"")),
        None => return Err("missing subcommand".to_string()),
    };

    let mut config_path = None;
    let mut out_dir = None;
    let mut seed = None;
    while let Some(flag) = argv.next() {
        match flag.as_str() {
            "--config" => {
                let value = argv.next().ok_or("missing value for --config")?;
                config_path = Some(PathBuf::from(value));
            }
            "--out" => {
                let value = argv.next().ok_or("missing value for --out")?;
                out_dir = Some(PathBuf::from(value));
            }
            "--seed" => {
                let value = argv.next().ok_or("missing value for --seed")?;
                seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| format!("--seed must be a u64, got \"{value}\""))?,
                );
            }
            "--help" | "-h" => return Err(String::new()),
            other => return Err(format!("unknown flag \"{other}\"")),
        }
    }

    Ok(Args {
        command,
        config_path: config_path.ok_or("missing required --config <path>")?,
        out_dir,
        seed,
    })
}

fn main() -> ExitCode {
    let args = match parse_args(std::env::args().skip(1)) {
        Ok(args) => args,
        Err(message) => {
            if message.is_empty() {
                print!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {message}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };

    let text = match std::fs::read_to_string(&args.config_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config_path.display());
            return ExitCode::from(2);
        }
    };
    let config = match ExperimentConfig::from_json(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{}: {e}", args.config_path.display());
            return ExitCode::from(2);
        }
    };

    match args.command {
        Command::Validate => {
            println!("ok: {}", args.config_path.display());
            ExitCode::SUCCESS
        }
        Command::Run => match run_experiment(&config, args.out_dir.as_deref(), args.seed) {
            Ok(outcome) => {
                for row in &outcome.summary {
                    let err = row
                        .mean_endpoint_error
                        .map(|e| format!("{e:.6e}"))
                        .unwrap_or_else(|| "-".to_string());
                    println!(
                        "{:<14} ok {:>4} / failed {:<4} mean endpoint error {}",
                        row.label, row.runs_ok, row.runs_failed, err
                    );
                    if let Some(message) = &row.first_failure {
                        eprintln!("  {}: first failure: {message}", row.label);
                    }
                }
                println!(
                    "wrote {} file(s) to {}",
                    outcome.files_written,
                    outcome.out_dir.display()
                );
                if outcome.all_failed {
                    eprintln!("error: numeric failure in all runs");
                    ExitCode::from(3)
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(RunError::Config(e)) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
