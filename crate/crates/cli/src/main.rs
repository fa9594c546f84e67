use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use catcx_cli::{dispatch, error_outcome, load, Flags, Outcome, COMMANDS, EXIT_MALFORMED};
use catcx_core::doc::{self, ParseOptions};
use clap::builder::PossibleValuesParser;
use clap::Parser;

fn after_help() -> String {
    let mut s = String::from("Commands:\n");
    for (name, args) in COMMANDS {
        s.push_str(&format!("  {name:<16} {args}\n"));
    }
    s.push_str("\nExit codes: 0 success/valid, 1 validation failure, 2 malformed input.\n");
    s.push_str(&format!("{} caps every dimension (default {}).", doc::MAX_DIM_VAR, doc::DEFAULT_MAX_DIM));
    s
}

/// Exact linear-algebra models of categorical complexes, over JSON documents.
#[derive(Parser, Debug)]
#[command(name = "catcx", version, after_help = after_help())]
struct Cli {
    #[arg(value_parser = PossibleValuesParser::new(COMMANDS.iter().map(|c| c.0)), hide_possible_values = true)]
    command: String,

    /// Input documents, one per file.
    files: Vec<PathBuf>,

    /// Reject non-reduced rationals instead of normalizing them.
    #[arg(long)]
    strict: bool,

    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Indent the JSON output.
    #[arg(long)]
    pretty: bool,

    /// encode-sheaf: build the cosheaf encoding.
    #[arg(long)]
    dual: bool,

    /// dk-gamma: truncation level.
    #[arg(long)]
    top: Option<usize>,
}

fn execute(cli: &Cli) -> Outcome {
    let opts = ParseOptions::from_env().strict(cli.strict);
    let mut docs = Vec::with_capacity(cli.files.len());
    for path in &cli.files {
        match load(path, &opts) {
            Ok(p) => {
                for w in &p.warnings {
                    eprintln!("warning: {}: {w}", path.display());
                }
                docs.push(p.document);
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return error_outcome(&cli.command, &e);
            }
        }
    }
    let flags = Flags {
        dual: cli.dual,
        top: cli.top,
    };
    let outcome = dispatch(&cli.command, &flags, &docs);
    if let Some(err) = outcome.result.fields.get("error") {
        eprintln!("error: {}", err["message"].as_str().unwrap_or("failed"));
    }
    outcome
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    let text = doc::to_string(&outcome.document(), cli.pretty);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_MALFORMED);
    }
    ExitCode::from(outcome.exit)
}
