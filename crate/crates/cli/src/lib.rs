//! The `qnnlab` command line: lemma checks, bound verification, encoder
//! training and classification runs.
//!
//! Every run resolves its settings from flags over an optional `--config`
//! JSON file over defaults, then writes the resolved snapshot next to its
//! outputs as `resolved_config.json`. Re-running with only
//! `--config <snapshot>` reproduces the outputs byte for byte.
//!
//! Exit codes: 0 success / all checks pass, 1 a verification failed,
//! 2 configuration or budget error.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

/// Directory outputs land in when `--out` is not given: `$QNNLAB_OUT`,
/// falling back to the current directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("QNNLAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

#[derive(Parser, Debug)]
#[command(name = "qnnlab", version, about = "Structured-QNN laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

// parsed exactly once; per-variant size is irrelevant here
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the CNOT/CZ conjugation identities and the single-parameter
    /// integration identities on random operators.
    LemmaCheck(commands::lemma_check::LemmaCheckArgs),
    /// Verify a gradient-norm bound (tt/sc/dtt) or the encoder alpha bound.
    VerifyBounds(commands::verify_bounds::VerifyBoundsArgs),
    /// Train the variational amplitude encoder for one vector or a dataset.
    TrainEncoder(commands::train_encoder::TrainEncoderArgs),
    /// Train a binary classifier and report metrics.
    Classify(commands::classify::ClassifyArgs),
}

/// What a completed run reports back to the shell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Everything ran and every verification held: exit 0.
    Pass,
    /// The run completed but a verification failed: exit 1.
    Fail,
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::LemmaCheck(args) => commands::lemma_check::run(args),
        Command::VerifyBounds(args) => commands::verify_bounds::run(args),
        Command::TrainEncoder(args) => commands::train_encoder::run(args),
        Command::Classify(args) => commands::classify::run(args),
    }
}
