//! Library side of the `fansquare` binary: configuration, subcommands and
//! the exit-code contract.

pub mod commands;
pub mod config;
pub mod suite;

use fansquare_core::Error;
use thiserror::Error as ThisError;

pub use commands::Outcome;
pub use config::Config;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ORDINAL: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_CLOSURE: i32 = 4;
pub const EXIT_VALIDATOR: i32 = 5;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("config: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validator(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::Ordinal(_) => EXIT_ORDINAL,
                Error::GuardExceeded { .. } => EXIT_GUARD,
                Error::NotClosed(_) | Error::ClubMeetsSet(_) => EXIT_CLOSURE,
                Error::InvalidStaircase(_) | Error::NonMonotone { .. } | Error::Ladder(_) => {
                    EXIT_VALIDATOR
                }
                _ => EXIT_FAILURE,
            },
            CliError::Validator(_) => EXIT_VALIDATOR,
            CliError::Config(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Gen,
    Eval,
    Hset,
    Separate,
    Mincap,
    Adversary,
    Bound,
    Space,
    Growth,
    Verify,
}

pub fn run(cmd: Command, cfg: &Config) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cmd {
        Command::Gen => commands::gen(cfg),
        Command::Eval => commands::eval(cfg),
        Command::Hset => commands::hset(cfg),
        Command::Separate => commands::separate(cfg),
        Command::Mincap => commands::mincap(cfg),
        Command::Adversary => commands::adversary(cfg),
        Command::Bound => commands::bound(cfg),
        Command::Space => commands::space(cfg),
        Command::Growth => commands::growth(cfg),
        Command::Verify => verify(cfg),
    }
}

fn verify(cfg: &Config) -> Result<Outcome, CliError> {
    // a named family file is loaded first so a corrupt one fails validation
    if let Some(path) = &cfg.hfamily {
        config::load_h_family(path)?;
    }
    let report = suite::run_suite(cfg.seed);
    let mut body = serde_json::to_string_pretty(&report).map_err(Error::from)?;
    body.push('\n');
    let code = if report.passed() { 0 } else { EXIT_FAILURE };
    Ok(Outcome { body, code })
}
