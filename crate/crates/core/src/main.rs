use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ncrr::io::{parse_workspace, run_command, CommandArgs, Workspace};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Json,
    Text,
}

/// Exact Hochschild classes, Serre duality and Riemann-Roch checks for
/// finite-dimensional algebras.
#[derive(Parser, Debug)]
#[command(name = "ncrr", version)]
struct Cli {
    /// validate | cohomology | hh0 | class | pair | verify-rr | verify-serre | verify-suite
    command: String,
    /// Names of algebras, modules, maps or class expressions.
    args: Vec<String>,
    /// Workspace file (JSON, `format: 1`); the catalog is always available.
    #[arg(long)]
    workspace: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of random instances per algebra.
    #[arg(long)]
    random: Option<usize>,
    /// Worker threads for randomized batches.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Restrict randomized suites to these catalog algebras.
    #[arg(long = "algebra")]
    algebras: Vec<String>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let ws = match &cli.workspace {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match parse_workspace(&text) {
                Ok(ws) => ws,
                Err(e) => return input_error(format!("{}: {e}", path.display())),
            },
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        },
        None => Workspace::catalog_only(),
    };
    let args = CommandArgs { positional: cli.args, seed: cli.seed, random: cli.random, jobs: cli.jobs.max(1), algebras: cli.algebras };
    match run_command(&ws, &cli.command, &args) {
        Ok(report) => {
            match cli.output {
                Output::Json => println!("{}", report.to_json()),
                Output::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => input_error(e),
    }
}
