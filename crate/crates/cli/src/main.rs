use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use fansquare_cli::config::{Config, Format};
use fansquare_cli::{run, CliError, Command};

/// Experiments with ordinal function families, separations and the
/// associated finite spaces.
#[derive(Debug, Parser)]
#[command(name = "fansquare", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON config; defaults apply to omitted fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Working bound, an ordinal literal such as `w^(3)`.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn config(args: &Args) -> Result<Config, CliError> {
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(b) = &args.bound {
        cfg.bound = b.clone();
    }
    if let Some(c) = args.cap {
        cfg.cap = c;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if args.format.is_some() {
        cfg.format = args.format;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let result = config(&args).and_then(|cfg| {
        let outcome = run(args.command, &cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.body)?,
            None => print!("{}", outcome.body),
        }
        Ok(outcome.code)
    });
    eprintln!("{:?} finished in {:.3?}", args.command, start.elapsed());
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
