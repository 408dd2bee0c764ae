use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use tqftkit::{execute, render, RunOptions, EXIT_PARSE};

/// Run a TOML job file and print the result as JSON.
#[derive(Parser, Debug)]
#[command(name = "tqftkit", version)]
struct Args {
    /// Job file.
    jobfile: PathBuf,
    /// Re-run every applicable cross-check and fail on mismatch.
    #[arg(long)]
    verify: bool,
    /// Worker threads for the parallel sums.
    #[arg(long, env = "TQFTKIT_THREADS")]
    threads: Option<usize>,
    /// Spaces per indentation level; 0 prints a single line.
    #[arg(long, default_value_t = 2)]
    json_indent: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("tqftkit: cannot configure {n} threads: {e}");
        }
    }
    let text = match std::fs::read_to_string(&args.jobfile) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("tqftkit: cannot read {}: {e}", args.jobfile.display());
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let (doc, code) = execute(&text, RunOptions { verify: args.verify });
    println!("{}", render(&doc, args.json_indent));
    if let Some(msg) = doc.get("error").and_then(|e| e.get("message")).and_then(|m| m.as_str()) {
        eprintln!("tqftkit: {msg}");
    }
    ExitCode::from(code as u8)
}
