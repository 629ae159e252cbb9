use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gogout::report::{load, render_json, render_text, run, Command};
use gogout::{Error, Limits};

#[derive(Parser)]
#[command(name = "gogout", version, about = "Decide finiteness of Out(G) for graphs of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    machine: bool,
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
    #[arg(long, global = true)]
    max_word_length: Option<usize>,
    #[arg(long, global = true)]
    certificate_steps: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and check a graph of groups.
    Validate { file: PathBuf },
    /// Print the reduced graph.
    Reduce { file: PathBuf },
    /// Show the splitting along the minimal edge class.
    Decompose { file: PathBuf },
    /// Decide whether Out(G) is finite.
    Decide { file: PathBuf },
    /// Print only the witness of an infinite verdict.
    Witness { file: PathBuf },
    /// Print finite presentability evidence.
    CertifyFp { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = match &cli.command {
        Cmd::Validate { file } => (Command::Validate, file),
        Cmd::Reduce { file } => (Command::Reduce, file),
        Cmd::Decompose { file } => (Command::Decompose, file),
        Cmd::Decide { file } => (Command::Decide, file),
        Cmd::Witness { file } => (Command::Witness, file),
        Cmd::CertifyFp { file } => (Command::CertifyFp, file),
    };
    let mut limits = Limits::default();
    if let Some(v) = cli.max_group_order {
        limits.max_group_order = v;
    }
    if let Some(v) = cli.max_word_length {
        limits.max_word_length = v;
    }
    if let Some(v) = cli.certificate_steps {
        limits.certificate_steps = v;
    }
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let result = load(&text, &mut limits, cli.max_group_order.is_some()).and_then(|g| run(command, &g, &limits));
    match result {
        Ok(report) => {
            if cli.machine {
                println!("{}", render_json(&report));
            } else {
                print!("{}", render_text(&report));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_error(file, &e, cli.machine);
            ExitCode::from(if e.is_resource() { 2 } else { 1 })
        }
    }
}

fn report_error(file: &std::path::Path, e: &Error, machine: bool) {
    if machine {
        let v = serde_json::json!({ "error": e.to_string(), "resource": e.is_resource() });
        println!("{v}");
    } else {
        eprintln!("{}: {e}", file.display());
    }
}
