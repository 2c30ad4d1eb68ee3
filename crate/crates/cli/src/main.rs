use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};
use kcharge::dsl::{render_human, render_json, run, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Human,
    Json,
}

/// Evaluate kcharge scripts.
#[derive(Debug, Parser)]
#[command(name = "kcharge", version)]
#[command(group(ArgGroup::new("input").required(true).args(["script", "eval"])))]
struct Cli {
    /// Script file to run.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Script text to run.
    #[arg(long, value_name = "TEXT")]
    eval: Option<String>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Complex degree above which printed classes are truncated.
    #[arg(long, value_name = "N", default_value_t = 10)]
    degree_cap: u32,
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let source = match (&cli.script, &cli.eval) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, Some(text)) => text.clone(),
        (None, None) => unreachable!("clap enforces the input group"),
    };
    let result = run(&source, RunOptions { degree_cap: cli.degree_cap });
    let text = match cli.format {
        Format::Human => render_human(&result.outputs),
        Format::Json => render_json(&result.outputs),
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    match result.error {
        None => ExitCode::SUCCESS,
        Some(d) => {
            eprintln!("{d}");
            ExitCode::from(1)
        }
    }
}
