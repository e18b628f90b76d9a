//! `auclab`: AUROC/AUPRC metrics, mistake tables, synthetic score sets,
//! optimizer experiments and sweep correlation analysis.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 data error,
//! 4 metric undefined for the input.

use std::path::PathBuf;
use std::process::ExitCode;

use auclab_core::Error;
use clap::{Parser, Subcommand};

mod commands;
mod output;

#[derive(Parser)]
#[command(name = "auclab", version, about = "Exact AUROC/AUPRC analysis and synthetic optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report AUROC, AUPRC and their expectation forms for a score CSV.
    Metrics {
        input: PathBuf,
        /// Emit a JSON document instead of text.
        #[arg(long)]
        json: bool,
        /// Add per-group metrics (needs a `group` column).
        #[arg(long)]
        per_group: bool,
        /// Write ROC curve points to this CSV.
        #[arg(long, value_name = "PATH")]
        roc: Option<PathBuf>,
        /// Write precision-recall curve points to this CSV.
        #[arg(long, value_name = "PATH")]
        pr: Option<PathBuf>,
    },
    /// List incorrectly ranked adjacent pairs, largest AUPRC gain first.
    Mistakes {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate score CSVs from an experiment config.
    Synth { config: PathBuf },
    /// Run optimizer experiments and write trajectory and band CSVs.
    Optimize { config: PathBuf },
    /// Correlate per-group AUROC gaps with overall validation metrics.
    Sweep {
        /// Run-record CSVs; records are grouped by their `dataset` column.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn exit_code(err: &Error) -> u8 {
    if err.is_config() {
        2
    } else if err.is_undefined_metric() {
        4
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Metrics {
            input,
            json,
            per_group,
            roc,
            pr,
        } => commands::metrics::run(&input, json, per_group, roc.as_deref(), pr.as_deref()),
        Command::Mistakes { input, json } => commands::mistakes::run(&input, json),
        Command::Synth { config } => commands::synth::run(&config),
        Command::Optimize { config } => commands::optimize::run(&config),
        Command::Sweep { inputs, json } => commands::sweep::run(&inputs, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
