use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavelab::run::{check_run_dir, parse_config, run, scenario_table};

#[derive(Parser)]
#[command(name = "wave", about = "Weakly dissipative Camassa-Holm type solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file; WAVE_OUTPUT_ROOT sets the base of relative output dirs
    Run { config: PathBuf },
    /// List the built-in scenarios and their default parameters
    Scenarios,
    /// Re-read a run directory and report its checks
    Check { run_dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Scenarios => {
            print!("{}", scenario_table());
            0
        }
        Command::Run { config } => {
            let spec = match std::fs::read_to_string(&config).map_err(Into::into).and_then(|t| parse_config(&t)) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("wave: {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let root = std::env::var_os("WAVE_OUTPUT_ROOT").map(PathBuf::from);
            let dir = spec.output_path(root.as_deref());
            match run(&spec, &dir) {
                Ok(out) => {
                    for (k, v) in out.report.entries() {
                        if k.starts_with("check_") || k == "stop_reason" || k == "error" {
                            println!("{k}={v}");
                        }
                    }
                    println!("output={}", out.dir.display());
                    out.exit_code
                }
                Err(e) => {
                    eprintln!("wave: {e}");
                    2
                }
            }
        }
        Command::Check { run_dir } => match check_run_dir(&run_dir) {
            Ok(summary) => {
                for (c, v) in &summary.checks {
                    println!("{c}={v}");
                }
                for p in &summary.problems {
                    eprintln!("wave: {p}");
                }
                summary.exit_code
            }
            Err(e) => {
                eprintln!("wave: {}: {e}", run_dir.display());
                2
            }
        },
    };
    ExitCode::from(code as u8)
}
